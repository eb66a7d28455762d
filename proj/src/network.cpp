#include "mcdnn/network.hpp"

#include <cmath>

namespace mcdnn {

Network::Network(NetDescriptor desc) : desc_(std::move(desc)) {
    for (std::size_t i = 1; i < desc_.layers.size(); ++i) {
        const LayerSpec& s = desc_.layers[i];
        const LayerShape& prev = desc_.shapes[i - 1];
        switch (s.kind) {
        case LayerKind::Conv:
            nodes_.push_back(ConvNode{ConvLayer(prev.maps, s.maps, s.kernel), {}, {}});
            break;
        case LayerKind::MaxPool:
            nodes_.push_back(PoolNode{MaxPoolLayer(s.pool)});
            break;
        case LayerKind::Fully: {
            const int in = prev.spatial ? prev.maps * prev.h * prev.w : prev.units;
            FullyNode node{FullyLayer(in, s.units), {}, {}, i + 1 == desc_.layers.size()};
            nodes_.push_back(std::move(node));
            break;
        }
        case LayerKind::Input: break; // unreachable, parse allows it only first
        }
    }
}

Tensor Network::forward(const Tensor& input) {
    if (input.rank() != 3 || input.extent(0) != desc_.input_maps() || input.extent(1) != desc_.input_h() ||
        input.extent(2) != desc_.input_w())
        throw ShapeError("network forward: input does not match descriptor input " +
                         std::to_string(desc_.input_maps()) + "x" + std::to_string(desc_.input_h()) + "x" +
                         std::to_string(desc_.input_w()));

    Tensor cur = input;
    for (Node& n : nodes_) {
        if (auto* conv = std::get_if<ConvNode>(&n)) {
            conv->input = cur;
            Tensor z = conv->layer.forward(cur);
            conv->tanh_t = Tensor(z.shape());
            for (std::size_t i = 0; i < z.size(); ++i) {
                const double t = std::tanh(activation.b * z[i]);
                conv->tanh_t[i] = t;
                z[i] = activation.a * t;
            }
            cur = std::move(z);
        } else if (auto* pool = std::get_if<PoolNode>(&n)) {
            cur = pool->layer.forward(cur); // linear activation
        } else {
            auto& fc = std::get<FullyNode>(n);
            // spatial -> MLP flattening is row-major [map][row][col]
            fc.input = cur.rank() == 1 ? std::move(cur)
                                       : cur.reshaped({static_cast<int>(cur.size())});
            Tensor z = fc.layer.forward(fc.input);
            if (!fc.output) {
                fc.tanh_t = Tensor(z.shape());
                for (std::size_t i = 0; i < z.size(); ++i) {
                    const double t = std::tanh(activation.b * z[i]);
                    fc.tanh_t[i] = t;
                    z[i] = activation.a * t;
                }
            }
            cur = std::move(z);
        }
    }
    return cur;
}

std::vector<double> Network::predict(const Tensor& input) {
    return softmax(forward(input));
}

Tensor Network::backward(const Tensor& grad_logits) {
    Tensor grad = grad_logits;
    const double ab = activation.a * activation.b;
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
        if (auto* conv = std::get_if<ConvNode>(&*it)) {
            if (grad.size() != conv->tanh_t.size())
                throw StateError("network backward: stale forward caches");
            Tensor gz = conv->tanh_t.same_shape(grad) ? grad : grad.reshaped(conv->tanh_t.shape());
            for (std::size_t i = 0; i < gz.size(); ++i) {
                const double t = conv->tanh_t[i];
                gz[i] *= ab * (1.0 - t * t);
            }
            grad = conv->layer.backward(conv->input, gz);
        } else if (auto* pool = std::get_if<PoolNode>(&*it)) {
            grad = pool->layer.backward(grad);
        } else {
            auto& fc = std::get<FullyNode>(*it);
            Tensor gz = grad;
            if (!fc.output) {
                for (std::size_t i = 0; i < gz.size(); ++i) {
                    const double t = fc.tanh_t[i];
                    gz[i] *= ab * (1.0 - t * t);
                }
            }
            grad = fc.layer.backward(fc.input, gz);
        }
    }
    return grad;
}

double Network::loss_and_gradients(const Tensor& input, int label) {
    const Tensor logits = forward(input);
    auto [loss, grad_z] = cross_entropy(logits, label);
    backward(grad_z);
    return loss;
}

void Network::sgd_step(double eta) {
    auto params = parameters();
    auto grads = gradients();
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& w = *params[i];
        const Tensor& g = *grads[i];
        for (std::size_t j = 0; j < w.size(); ++j) w[j] -= eta * g[j];
    }
}

std::vector<Tensor*> Network::parameters() {
    std::vector<Tensor*> out;
    for (Node& n : nodes_) {
        if (auto* conv = std::get_if<ConvNode>(&n)) {
            out.push_back(&conv->layer.weights);
            out.push_back(&conv->layer.bias);
        } else if (auto* fc = std::get_if<FullyNode>(&n)) {
            out.push_back(&fc->layer.weights);
            out.push_back(&fc->layer.bias);
        }
    }
    return out;
}

std::vector<Tensor*> Network::gradients() {
    std::vector<Tensor*> out;
    for (Node& n : nodes_) {
        if (auto* conv = std::get_if<ConvNode>(&n)) {
            out.push_back(&conv->layer.grad_weights);
            out.push_back(&conv->layer.grad_bias);
        } else if (auto* fc = std::get_if<FullyNode>(&n)) {
            out.push_back(&fc->layer.grad_weights);
            out.push_back(&fc->layer.grad_bias);
        }
    }
    return out;
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t i = 1; i < desc_.layers.size(); ++i)
        n += static_cast<std::size_t>(layer_param_count(desc_, i));
    return n;
}

} // namespace mcdnn
