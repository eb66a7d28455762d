#include "mcdnn/tensor.hpp"

#include <algorithm>
#include <string>

namespace mcdnn {

Tensor::Tensor(std::vector<int> shape, double fill) : shape_(std::move(shape)) {
    std::size_t n = 1;
    for (int e : shape_) {
        if (e < 1)
            throw ShapeError("invalid shape: extent " + std::to_string(e) + " must be >= 1");
        n *= static_cast<std::size_t>(e);
    }
    if (shape_.empty()) n = 0;
    data_.assign(n, fill);
}

std::size_t Tensor::offset(const std::vector<int>& index) const {
    if (index.size() != shape_.size())
        throw ShapeError("index rank " + std::to_string(index.size()) + " does not match tensor rank " +
                         std::to_string(shape_.size()));
    std::size_t off = 0;
    for (std::size_t d = 0; d < shape_.size(); ++d) {
        if (index[d] < 0 || index[d] >= shape_[d])
            throw ShapeError("index " + std::to_string(index[d]) + " out of bounds for extent " +
                             std::to_string(shape_[d]));
        off = off * static_cast<std::size_t>(shape_[d]) + static_cast<std::size_t>(index[d]);
    }
    return off;
}

void Tensor::fill(double v) {
    std::fill(data_.begin(), data_.end(), v);
}

Tensor Tensor::reshaped(std::vector<int> shape) const {
    Tensor out(std::move(shape));
    if (out.size() != size())
        throw ShapeError("reshape changes element count from " + std::to_string(size()) + " to " +
                         std::to_string(out.size()));
    std::copy(data_.begin(), data_.end(), out.data_.begin());
    return out;
}

void fill_uniform(Tensor& t, Rng& rng, double lo, double hi) {
    if (!(lo < hi)) throw ShapeError("fill_uniform: invalid range, lo must be < hi");
    const double span = hi - lo;
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = lo + rng.unit() * span;
}

Tensor elementwise(const Tensor& t, const std::function<double(double)>& f) {
    Tensor out = t;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(out[i]);
    return out;
}

double reduce(const Tensor& t, const std::function<double(double, double)>& op, double init) {
    double acc = init;
    for (std::size_t i = 0; i < t.size(); ++i) acc = op(acc, t[i]);
    return acc;
}

} // namespace mcdnn
