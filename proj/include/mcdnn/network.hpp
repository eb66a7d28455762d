#pragma once

#include <variant>
#include <vector>

#include "mcdnn/descriptor.hpp"
#include "mcdnn/layers.hpp"

namespace mcdnn {

/// One DNN column body: convolution and pooling stages followed by the MLP
/// top, built straight from a descriptor. Convolutional and hidden fully
/// connected layers use the scaled tanh, pooling is linear, the final layer
/// emits logits for an external softmax.
///
/// forward/backward mutate per-layer caches, so one instance is driven by a
/// single worker at a time; distinct instances are fully independent.
class Network {
public:
    explicit Network(NetDescriptor desc);

    const NetDescriptor& descriptor() const { return desc_; }
    int class_count() const { return desc_.class_count(); }

    /// Logits (pre-softmax) for one [maps,h,w] input.
    Tensor forward(const Tensor& input);

    /// Softmax probabilities for one input.
    std::vector<double> predict(const Tensor& input);

    /// Backpropagate dL/dlogits from the last forward pass; per-layer
    /// parameter gradients are stored in the layers. Returns dL/dinput.
    Tensor backward(const Tensor& grad_logits);

    /// forward + cross-entropy + backward in one step; returns the loss.
    double loss_and_gradients(const Tensor& input, int label);

    /// Online SGD update w <- w - eta * grad on every parameter.
    void sgd_step(double eta);

    /// Parameter / gradient tensors in canonical order: per layer, weights
    /// then bias. Used by the initializer, the serializer and gradient tests.
    std::vector<Tensor*> parameters();
    std::vector<Tensor*> gradients();
    std::size_t parameter_count() const;

    ScaledTanh activation; // shared by all tanh stages

private:
    struct ConvNode {
        ConvLayer layer;
        Tensor input;  // cached pre-activation input
        Tensor tanh_t; // tanh(B*z) per element, reused by the backward pass
    };
    struct PoolNode {
        MaxPoolLayer layer;
    };
    struct FullyNode {
        FullyLayer layer;
        Tensor input;
        Tensor tanh_t; // empty for the output layer (linear logits)
        bool output = false;
    };
    using Node = std::variant<ConvNode, PoolNode, FullyNode>;

    NetDescriptor desc_;
    std::vector<Node> nodes_;
};

} // namespace mcdnn
