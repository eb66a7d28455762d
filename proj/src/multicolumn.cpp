#include "mcdnn/multicolumn.hpp"

namespace mcdnn {

int Ensemble::class_count() const {
    validate();
    return columns.front().net.class_count();
}

void Ensemble::validate() const {
    if (columns.empty()) throw StateError("ensemble: no columns");
    const int c = columns.front().net.class_count();
    for (const Column& col : columns)
        if (col.net.class_count() != c)
            throw StateError("ensemble: columns disagree on the class count");
}

Tensor prepare_image(const Tensor& raw, const PreChain& chain, int canvas_h, int canvas_w) {
    Tensor img = apply_chain(raw, chain, canvas_h, canvas_w);
    if (img.extent(1) < canvas_h || img.extent(2) < canvas_w)
        img = pad_canvas_image(img, canvas_h, canvas_w);
    return img;
}

Dataset prepare_dataset(const Dataset& ds, const PreChain& chain, int canvas_h, int canvas_w) {
    Dataset out;
    out.labels = ds.labels;
    out.class_count = ds.class_count;
    out.name = ds.name + ":" + format_chain(chain);
    out.images.reserve(ds.images.size());
    for (const Tensor& img : ds.images)
        out.images.push_back(prepare_image(img, chain, canvas_h, canvas_w));
    return out;
}

std::vector<double> predict_column(Column& col, const Tensor& raw_image) {
    const NetDescriptor& d = col.net.descriptor();
    return col.net.predict(prepare_image(raw_image, col.preprocessor, d.input_h(), d.input_w()));
}

std::vector<double> predict_ensemble(Ensemble& e, const Tensor& raw_image) {
    e.validate();
    std::vector<double> mean;
    for (Column& col : e.columns) {
        const auto p = predict_column(col, raw_image);
        if (mean.empty())
            mean = p;
        else
            for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += p[i];
    }
    for (double& v : mean) v /= static_cast<double>(e.columns.size());
    return mean;
}

Classification classify(const std::vector<double>& p) {
    if (p.empty()) throw ShapeError("classify: empty distribution");
    int best = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i] > p[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    return {best, p[static_cast<std::size_t>(best)]};
}

int second_guess(const std::vector<double>& p) {
    if (p.size() < 2) throw ShapeError("second_guess: need at least 2 classes");
    const int first = classify(p).label;
    int second = first == 0 ? 1 : 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (static_cast<int>(i) == first) continue;
        if (p[i] > p[static_cast<std::size_t>(second)]) second = static_cast<int>(i);
    }
    return second;
}

int classify_with_reject(const std::vector<double>& p, double threshold) {
    if (threshold < 0.0 || threshold > 1.0)
        throw ShapeError("classify_with_reject: threshold must lie in [0,1]");
    const Classification c = classify(p);
    return c.confidence < threshold ? kReject : c.label;
}

} // namespace mcdnn
