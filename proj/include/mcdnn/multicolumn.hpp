#pragma once

#include <string>
#include <vector>

#include "mcdnn/dataset.hpp"
#include "mcdnn/network.hpp"
#include "mcdnn/preprocess.hpp"

namespace mcdnn {

/// One trained net bound to the preprocessor its training data went through.
struct Column {
    Network net;
    PreChain preprocessor;
    std::uint64_t seed = 0;

    Column(Network net, PreChain preprocessor, std::uint64_t seed)
        : net(std::move(net)), preprocessor(std::move(preprocessor)), seed(seed) {}
};

/// Columns whose softmax outputs are democratically averaged. Summation runs
/// in ascending column order, so results are reproducible bit for bit.
struct Ensemble {
    std::vector<Column> columns;

    int class_count() const;
    void validate() const; // non-empty, all columns agree on the class count
};

/// Run the column's preprocessor chain on a raw image (padding up to the
/// net's input canvas when needed) and return the softmax output.
std::vector<double> predict_column(Column& col, const Tensor& raw_image);

/// Unweighted arithmetic mean of all column outputs.
std::vector<double> predict_ensemble(Ensemble& e, const Tensor& raw_image);

struct Classification {
    int label = 0;
    double confidence = 0.0;
};

/// Argmax class (ties to the smallest index) and its probability.
Classification classify(const std::vector<double>& p);

/// Class of the second-largest probability.
int second_guess(const std::vector<double>& p);

inline constexpr int kReject = -1;

/// kReject iff confidence < threshold, else the argmax class.
int classify_with_reject(const std::vector<double>& p, double threshold);

/// Preprocess-then-pad pipeline shared by training and prediction.
Tensor prepare_image(const Tensor& raw, const PreChain& chain, int canvas_h, int canvas_w);
Dataset prepare_dataset(const Dataset& ds, const PreChain& chain, int canvas_h, int canvas_w);

} // namespace mcdnn
