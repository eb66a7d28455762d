#pragma once

#include <string>
#include <vector>

#include "mcdnn/error.hpp"

namespace mcdnn {

/// True-class x predicted-class counts; row = true label, col = prediction.
struct ConfusionMatrix {
    int classes = 0;
    std::vector<long long> counts; // row-major classes x classes

    explicit ConfusionMatrix(int classes = 0)
        : classes(classes), counts(static_cast<std::size_t>(classes) * classes, 0) {}

    long long& at(int true_label, int predicted) {
        return counts[static_cast<std::size_t>(true_label) * classes + predicted];
    }
    long long at(int true_label, int predicted) const {
        return counts[static_cast<std::size_t>(true_label) * classes + predicted];
    }
    long long total() const;
    long long errors() const; // off-diagonal mass

    bool operator==(const ConfusionMatrix&) const = default;
};

struct RejectionPoint {
    double threshold = 0.0;
    double reject_fraction = 0.0;
    double error_on_accepted = 0.0; // 0 when everything is rejected
    bool all_rejected = false;
};

struct MisclassifiedItem {
    int index = 0;
    int true_label = 0;
    int first = 0;
    int second = 0;
    double confidence = 0.0;
};

struct EvaluationReport {
    double error_rate = 0.0;
    double second_guess_error = 0.0; // first AND second prediction wrong
    ConfusionMatrix confusion;
    std::vector<RejectionPoint> rejection_curve; // thresholds 0, 0.1, ..., 1.0
    std::vector<MisclassifiedItem> misclassified;
};

/// Largest and second-largest probability classes; ties go to the smaller
/// class index.
std::pair<int, int> top_two(const std::vector<double>& p);

EvaluationReport evaluate(const std::vector<std::vector<double>>& predictions,
                          const std::vector<int>& labels);

/// For each threshold (sorted ascending): fraction with confidence below it,
/// and the error rate among the accepted rest.
std::vector<RejectionPoint> rejection_curve(const std::vector<std::vector<double>>& predictions,
                                            const std::vector<int>& labels,
                                            const std::vector<double>& thresholds);

/// Aligned text table of counts plus each off-diagonal cell's share of the
/// total error count.
std::string render_confusion(const ConfusionMatrix& cm);

std::string confusion_csv(const ConfusionMatrix& cm);
ConfusionMatrix parse_confusion_csv(const std::string& text);
std::string rejection_csv(const std::vector<RejectionPoint>& curve);
std::string errors_csv(const std::vector<MisclassifiedItem>& items);

} // namespace mcdnn
