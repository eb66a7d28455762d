#include "mcdnn/evaluate.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace mcdnn {

long long ConfusionMatrix::total() const {
    long long t = 0;
    for (long long c : counts) t += c;
    return t;
}

long long ConfusionMatrix::errors() const {
    long long e = 0;
    for (int t = 0; t < classes; ++t)
        for (int p = 0; p < classes; ++p)
            if (t != p) e += at(t, p);
    return e;
}

std::pair<int, int> top_two(const std::vector<double>& p) {
    if (p.size() < 2) throw ShapeError("top_two: need at least 2 classes");
    int first = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i] > p[static_cast<std::size_t>(first)]) first = static_cast<int>(i);
    int second = first == 0 ? 1 : 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (static_cast<int>(i) == first) continue;
        if (p[i] > p[static_cast<std::size_t>(second)]) second = static_cast<int>(i);
    }
    return {first, second};
}

EvaluationReport evaluate(const std::vector<std::vector<double>>& predictions,
                          const std::vector<int>& labels) {
    if (predictions.size() != labels.size())
        throw ShapeError("evaluate: " + std::to_string(predictions.size()) + " predictions but " +
                         std::to_string(labels.size()) + " labels");
    if (predictions.empty()) throw ShapeError("evaluate: empty prediction list");
    const int classes = static_cast<int>(predictions.front().size());

    EvaluationReport rep;
    rep.confusion = ConfusionMatrix(classes);
    long long wrong = 0, wrong_both = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const auto& p = predictions[i];
        if (static_cast<int>(p.size()) != classes)
            throw ShapeError("evaluate: prediction " + std::to_string(i) + " has inconsistent class count");
        const int label = labels[i];
        if (label < 0 || label >= classes)
            throw ShapeError("evaluate: label " + std::to_string(label) + " out of range");
        const auto [first, second] = top_two(p);
        rep.confusion.at(label, first) += 1;
        if (first != label) {
            ++wrong;
            if (second != label) ++wrong_both;
            rep.misclassified.push_back({static_cast<int>(i), label, first, second,
                                         p[static_cast<std::size_t>(first)]});
        }
    }
    const double n = static_cast<double>(predictions.size());
    rep.error_rate = static_cast<double>(wrong) / n;
    rep.second_guess_error = static_cast<double>(wrong_both) / n;

    std::vector<double> thresholds;
    for (int i = 0; i <= 10; ++i) thresholds.push_back(i / 10.0);
    rep.rejection_curve = rejection_curve(predictions, labels, thresholds);
    return rep;
}

std::vector<RejectionPoint> rejection_curve(const std::vector<std::vector<double>>& predictions,
                                            const std::vector<int>& labels,
                                            const std::vector<double>& thresholds) {
    if (predictions.size() != labels.size()) throw ShapeError("rejection_curve: length mismatch");
    if (!std::is_sorted(thresholds.begin(), thresholds.end()))
        throw ShapeError("rejection_curve: thresholds must be sorted ascending");

    std::vector<double> confidence(predictions.size());
    std::vector<bool> correct(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const auto [first, second] = top_two(predictions[i]);
        (void)second;
        confidence[i] = predictions[i][static_cast<std::size_t>(first)];
        correct[i] = first == labels[i];
    }

    std::vector<RejectionPoint> curve;
    for (double thr : thresholds) {
        long long rejected = 0, accepted = 0, accepted_wrong = 0;
        for (std::size_t i = 0; i < confidence.size(); ++i) {
            if (confidence[i] < thr) {
                ++rejected;
            } else {
                ++accepted;
                if (!correct[i]) ++accepted_wrong;
            }
        }
        RejectionPoint pt;
        pt.threshold = thr;
        pt.reject_fraction = static_cast<double>(rejected) / static_cast<double>(confidence.size());
        pt.all_rejected = accepted == 0;
        pt.error_on_accepted =
            pt.all_rejected ? 0.0 : static_cast<double>(accepted_wrong) / static_cast<double>(accepted);
        curve.push_back(pt);
    }
    return curve;
}

std::string render_confusion(const ConfusionMatrix& cm) {
    const long long errors = cm.errors();
    std::ostringstream out;
    out << "confusion matrix (rows = true label, cols = predicted; off-diagonal cells\n"
        << "also show their share of all " << errors << " errors)\n";
    out << std::setw(6) << "";
    for (int p = 0; p < cm.classes; ++p) out << std::setw(12) << p;
    out << "\n";
    for (int t = 0; t < cm.classes; ++t) {
        out << std::setw(6) << t;
        for (int p = 0; p < cm.classes; ++p) {
            std::ostringstream cell;
            cell << cm.at(t, p);
            if (t != p && cm.at(t, p) > 0 && errors > 0) {
                cell << " (" << std::fixed << std::setprecision(1)
                     << 100.0 * static_cast<double>(cm.at(t, p)) / static_cast<double>(errors) << "%)";
            }
            out << std::setw(12) << cell.str();
        }
        out << "\n";
    }
    return out.str();
}

std::string confusion_csv(const ConfusionMatrix& cm) {
    std::ostringstream out;
    for (int t = 0; t < cm.classes; ++t) {
        for (int p = 0; p < cm.classes; ++p) {
            if (p) out << ',';
            out << cm.at(t, p);
        }
        out << '\n';
    }
    return out.str();
}

ConfusionMatrix parse_confusion_csv(const std::string& text) {
    std::vector<std::vector<long long>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<long long> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stoll(cell));
        rows.push_back(std::move(row));
    }
    ConfusionMatrix cm(static_cast<int>(rows.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t].size() != rows.size()) throw DataError("confusion CSV is not square");
        for (std::size_t p = 0; p < rows[t].size(); ++p)
            cm.at(static_cast<int>(t), static_cast<int>(p)) = rows[t][p];
    }
    return cm;
}

std::string rejection_csv(const std::vector<RejectionPoint>& curve) {
    std::ostringstream out;
    out << "threshold,reject_fraction,error_on_accepted,all_rejected\n";
    out << std::setprecision(17);
    for (const auto& pt : curve)
        out << pt.threshold << ',' << pt.reject_fraction << ',' << pt.error_on_accepted << ','
            << (pt.all_rejected ? 1 : 0) << '\n';
    return out.str();
}

std::string errors_csv(const std::vector<MisclassifiedItem>& items) {
    std::ostringstream out;
    out << "index,true,first,second,confidence\n";
    out << std::setprecision(17);
    for (const auto& it : items)
        out << it.index << ',' << it.true_label << ',' << it.first << ',' << it.second << ','
            << it.confidence << '\n';
    return out.str();
}

} // namespace mcdnn
