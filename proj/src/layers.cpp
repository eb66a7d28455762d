#include "mcdnn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcdnn {

namespace {

void require_3d(const Tensor& t, const char* who) {
    if (t.rank() != 3) throw ShapeError(std::string(who) + ": expected a [maps,h,w] tensor");
}

} // namespace

double ScaledTanh::value(double x) const {
    return a * std::tanh(b * x);
}

double ScaledTanh::grad(double x) const {
    const double t = std::tanh(b * x);
    return a * b * (1.0 - t * t);
}

ConvLayer::ConvLayer(int in_maps_, int out_maps_, int kernel_)
    : in_maps(in_maps_),
      out_maps(out_maps_),
      kernel(kernel_),
      weights({out_maps_, in_maps_, kernel_, kernel_}),
      bias({out_maps_}),
      grad_weights({out_maps_, in_maps_, kernel_, kernel_}),
      grad_bias({out_maps_}) {}

Tensor ConvLayer::forward(const Tensor& input) const {
    require_3d(input, "conv forward");
    if (input.extent(0) != in_maps)
        throw ShapeError("conv forward: input has " + std::to_string(input.extent(0)) + " maps, layer expects " +
                         std::to_string(in_maps));
    const int h = input.extent(1), w = input.extent(2);
    const int oh = h - kernel + 1, ow = w - kernel + 1;
    if (oh < 1 || ow < 1)
        throw ShapeError("conv forward: kernel " + std::to_string(kernel) + " larger than input " +
                         std::to_string(h) + "x" + std::to_string(w));

    Tensor out({out_maps, oh, ow});
    for (int o = 0; o < out_maps; ++o) {
        double* obase = out.data() + static_cast<std::size_t>(o) * oh * ow;
        std::fill(obase, obase + static_cast<std::size_t>(oh) * ow, bias[static_cast<std::size_t>(o)]);
        for (int i = 0; i < in_maps; ++i) {
            const double* ibase = input.data() + static_cast<std::size_t>(i) * h * w;
            const double* wbase =
                weights.data() + (static_cast<std::size_t>(o) * in_maps + i) * kernel * kernel;
            for (int u = 0; u < kernel; ++u) {
                for (int v = 0; v < kernel; ++v) {
                    const double wk = wbase[u * kernel + v];
                    for (int y = 0; y < oh; ++y) {
                        const double* src = ibase + static_cast<std::size_t>(y + u) * w + v;
                        double* dst = obase + static_cast<std::size_t>(y) * ow;
                        for (int x = 0; x < ow; ++x) dst[x] += wk * src[x];
                    }
                }
            }
        }
    }
    return out;
}

Tensor ConvLayer::backward(const Tensor& input, const Tensor& grad_out) {
    require_3d(input, "conv backward");
    require_3d(grad_out, "conv backward");
    const int h = input.extent(1), w = input.extent(2);
    const int oh = h - kernel + 1, ow = w - kernel + 1;
    if (grad_out.extent(0) != out_maps || grad_out.extent(1) != oh || grad_out.extent(2) != ow)
        throw ShapeError("conv backward: grad_out shape does not match the forward output");

    grad_weights.fill(0.0);
    grad_bias.fill(0.0);
    Tensor grad_input({in_maps, h, w});

    for (int o = 0; o < out_maps; ++o) {
        const double* gbase = grad_out.data() + static_cast<std::size_t>(o) * oh * ow;
        double gb = 0.0;
        for (std::size_t i = 0; i < static_cast<std::size_t>(oh) * ow; ++i) gb += gbase[i];
        grad_bias[static_cast<std::size_t>(o)] += gb;

        for (int i = 0; i < in_maps; ++i) {
            const double* ibase = input.data() + static_cast<std::size_t>(i) * h * w;
            double* gibase = grad_input.data() + static_cast<std::size_t>(i) * h * w;
            const std::size_t woff = (static_cast<std::size_t>(o) * in_maps + i) * kernel * kernel;
            for (int u = 0; u < kernel; ++u) {
                for (int v = 0; v < kernel; ++v) {
                    double gw = 0.0;
                    const double wk = weights[woff + static_cast<std::size_t>(u) * kernel + v];
                    for (int y = 0; y < oh; ++y) {
                        const double* src = ibase + static_cast<std::size_t>(y + u) * w + v;
                        double* gdst = gibase + static_cast<std::size_t>(y + u) * w + v;
                        const double* g = gbase + static_cast<std::size_t>(y) * ow;
                        for (int x = 0; x < ow; ++x) {
                            gw += g[x] * src[x];
                            gdst[x] += g[x] * wk;
                        }
                    }
                    grad_weights[woff + static_cast<std::size_t>(u) * kernel + v] += gw;
                }
            }
        }
    }
    return grad_input;
}

MaxPoolLayer::MaxPoolLayer(int size_) : size(size_) {
    if (size < 2) throw ShapeError("max pooling size must be >= 2");
}

Tensor MaxPoolLayer::forward(const Tensor& input) {
    require_3d(input, "maxpool forward");
    const int m = input.extent(0), h = input.extent(1), w = input.extent(2);
    if (h % size != 0 || w % size != 0)
        throw ShapeError("maxpool forward: pool size " + std::to_string(size) + " does not divide " +
                         std::to_string(h) + "x" + std::to_string(w));
    const int oh = h / size, ow = w / size;

    Tensor out({m, oh, ow});
    winners.assign(static_cast<std::size_t>(m) * oh * ow, 0);
    in_shape = {m, h, w};
    has_winners = true;

    std::size_t cell = 0;
    for (int i = 0; i < m; ++i) {
        const double* ibase = input.data() + static_cast<std::size_t>(i) * h * w;
        for (int y = 0; y < oh; ++y) {
            for (int x = 0; x < ow; ++x, ++cell) {
                int best = (y * size) * w + (x * size);
                double bv = ibase[best];
                for (int u = 0; u < size; ++u) {
                    const int row = (y * size + u) * w + x * size;
                    for (int v = 0; v < size; ++v) {
                        // strict >, so ties keep the smallest row-major offset
                        if (ibase[row + v] > bv) {
                            bv = ibase[row + v];
                            best = row + v;
                        }
                    }
                }
                out[cell] = bv;
                winners[cell] = best + i * h * w;
            }
        }
    }
    return out;
}

Tensor MaxPoolLayer::backward(const Tensor& grad_out) const {
    if (!has_winners) throw StateError("maxpool backward: no cached winners, run forward first");
    const std::size_t cells = winners.size();
    if (grad_out.size() != cells)
        throw ShapeError("maxpool backward: grad_out size does not match the cached forward output");
    Tensor grad_input(in_shape);
    for (std::size_t c = 0; c < cells; ++c)
        grad_input[static_cast<std::size_t>(winners[c])] += grad_out[c];
    return grad_input;
}

FullyLayer::FullyLayer(int in_units_, int out_units_)
    : in_units(in_units_),
      out_units(out_units_),
      weights({out_units_, in_units_}),
      bias({out_units_}),
      grad_weights({out_units_, in_units_}),
      grad_bias({out_units_}) {}

Tensor FullyLayer::forward(const Tensor& input_flat) const {
    if (static_cast<int>(input_flat.size()) != in_units)
        throw ShapeError("fully forward: input size " + std::to_string(input_flat.size()) +
                         " does not match layer input " + std::to_string(in_units));
    Tensor out({out_units});
    for (int o = 0; o < out_units; ++o) {
        const double* wrow = weights.data() + static_cast<std::size_t>(o) * in_units;
        double acc = bias[static_cast<std::size_t>(o)];
        for (int i = 0; i < in_units; ++i) acc += wrow[i] * input_flat[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(o)] = acc;
    }
    return out;
}

Tensor FullyLayer::backward(const Tensor& input_flat, const Tensor& grad_out) {
    if (static_cast<int>(grad_out.size()) != out_units)
        throw ShapeError("fully backward: grad_out size does not match layer output");
    Tensor grad_input({in_units});
    for (int o = 0; o < out_units; ++o) {
        const double g = grad_out[static_cast<std::size_t>(o)];
        grad_bias[static_cast<std::size_t>(o)] = g;
        const double* wrow = weights.data() + static_cast<std::size_t>(o) * in_units;
        double* gwrow = grad_weights.data() + static_cast<std::size_t>(o) * in_units;
        for (int i = 0; i < in_units; ++i) {
            gwrow[i] = g * input_flat[static_cast<std::size_t>(i)];
            grad_input[static_cast<std::size_t>(i)] += g * wrow[i];
        }
    }
    return grad_input;
}

std::vector<double> softmax(const Tensor& logits) {
    const std::size_t c = logits.size();
    if (c < 2) throw ShapeError("softmax: need at least 2 classes");
    double mx = logits[0];
    for (std::size_t i = 1; i < c; ++i) mx = std::max(mx, logits[i]);
    std::vector<double> p(c);
    double sum = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
        p[i] = std::exp(logits[i] - mx);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

std::pair<double, Tensor> cross_entropy(const Tensor& logits, int label) {
    const std::size_t c = logits.size();
    if (label < 0 || static_cast<std::size_t>(label) >= c)
        throw ShapeError("cross_entropy: label " + std::to_string(label) + " out of range for " +
                         std::to_string(c) + " classes");
    double mx = logits[0];
    for (std::size_t i = 1; i < c; ++i) mx = std::max(mx, logits[i]);
    double sum = 0.0;
    for (std::size_t i = 0; i < c; ++i) sum += std::exp(logits[i] - mx);
    const double log_sum = std::log(sum);
    const double loss = -(logits[static_cast<std::size_t>(label)] - mx - log_sum);

    Tensor grad({static_cast<int>(c)});
    for (std::size_t i = 0; i < c; ++i) grad[i] = std::exp(logits[i] - mx) / sum;
    grad[static_cast<std::size_t>(label)] -= 1.0;
    return {loss, std::move(grad)};
}

} // namespace mcdnn
