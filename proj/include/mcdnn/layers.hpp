#pragma once

#include <utility>
#include <vector>

#include "mcdnn/tensor.hpp"

namespace mcdnn {

// Scaled hyperbolic tangent x -> A*tanh(B*x), the standard constants from the
// LeCun line of work. Kept configurable through ScaledTanh.
inline constexpr double kTanhA = 1.7159;
inline constexpr double kTanhB = 2.0 / 3.0;

struct ScaledTanh {
    double a = kTanhA;
    double b = kTanhB;
    double value(double x) const;
    double grad(double x) const; // d/dx A*tanh(B*x)
};

/// Valid convolution (no padding, stride 1), every input map connected to
/// every output map. weights layout [out_maps][in_maps][k][k].
struct ConvLayer {
    int in_maps = 0;
    int out_maps = 0;
    int kernel = 0;
    Tensor weights;
    Tensor bias;
    Tensor grad_weights;
    Tensor grad_bias;

    ConvLayer() = default;
    ConvLayer(int in_maps, int out_maps, int kernel);

    /// out[o,y,x] = bias[o] + sum_i sum_{u,v} w[o,i,u,v] * in[i,y+u,x+v].
    /// No activation; the network applies it.
    Tensor forward(const Tensor& input) const;

    /// Exact gradients w.r.t. input and parameters; parameter gradients land
    /// in grad_weights / grad_bias (overwritten, not accumulated).
    Tensor backward(const Tensor& input, const Tensor& grad_out);
};

/// Winner-take-all pooling over non-overlapping p x p regions. The forward
/// pass caches each region's argmax; backward routes gradients only to those
/// winners. Ties go to the smallest row-major offset.
struct MaxPoolLayer {
    int size = 0;
    std::vector<int> winners; // flat input offset per output cell
    std::vector<int> in_shape;
    bool has_winners = false;

    explicit MaxPoolLayer(int size = 2);

    Tensor forward(const Tensor& input);

    /// Zero everywhere except the cached winner coordinates.
    Tensor backward(const Tensor& grad_out) const;
};

struct FullyLayer {
    int in_units = 0;
    int out_units = 0;
    Tensor weights; // [out][in]
    Tensor bias;    // [out]
    Tensor grad_weights;
    Tensor grad_bias;

    FullyLayer() = default;
    FullyLayer(int in_units, int out_units);

    Tensor forward(const Tensor& input_flat) const;
    Tensor backward(const Tensor& input_flat, const Tensor& grad_out);
};

/// Numerically stable softmax of a logit vector (C >= 2).
std::vector<double> softmax(const Tensor& logits);

/// loss = -log p_label, grad_z = p - onehot(label), both computed from the
/// logits in log domain so huge logits stay finite.
std::pair<double, Tensor> cross_entropy(const Tensor& logits, int label);

} // namespace mcdnn
