#include "mcdnn/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace mcdnn {

namespace {

void require_image(const Tensor& t, const char* who) {
    if (t.rank() != 3) throw ShapeError(std::string(who) + ": expected a [maps,h,w] image");
}

double sample_bilinear(const double* plane, int h, int w, double xs, double ys, double fill,
                       bool edge_clamp) {
    if (edge_clamp) {
        xs = std::clamp(xs, 0.0, static_cast<double>(w - 1));
        ys = std::clamp(ys, 0.0, static_cast<double>(h - 1));
    }
    const double xf = std::floor(xs), yf = std::floor(ys);
    const int x0 = static_cast<int>(xf), y0 = static_cast<int>(yf);
    const double fx = xs - xf, fy = ys - yf;

    auto tap = [&](int yy, int xx) -> double {
        if (xx < 0 || xx >= w || yy < 0 || yy >= h) return fill;
        return plane[static_cast<std::size_t>(yy) * w + xx];
    };
    const double v00 = tap(y0, x0), v01 = tap(y0, x0 + 1);
    const double v10 = tap(y0 + 1, x0), v11 = tap(y0 + 1, x0 + 1);
    return (1 - fy) * ((1 - fx) * v00 + fx * v01) + fy * ((1 - fx) * v10 + fx * v11);
}

Tensor resample(const Tensor& image, const std::vector<double>& xs, const std::vector<double>& ys,
                double fill, bool edge_clamp) {
    const int m = image.extent(0), h = image.extent(1), w = image.extent(2);
    Tensor out(image.shape());
    for (int i = 0; i < m; ++i) {
        const double* src = image.data() + static_cast<std::size_t>(i) * h * w;
        double* dst = out.data() + static_cast<std::size_t>(i) * h * w;
        for (std::size_t p = 0; p < static_cast<std::size_t>(h) * w; ++p)
            dst[p] = sample_bilinear(src, h, w, xs[p], ys[p], fill, edge_clamp);
    }
    return out;
}

} // namespace

AffineTransform sample_affine(Rng& rng, const DistortionParams& params, int h, int w) {
    double theta = 0.0, sx = 1.0, sy = 1.0, tx = 0.0, ty = 0.0;
    if (params.max_rotate > 0) theta = rng.uniform(-params.max_rotate, params.max_rotate);
    if (params.max_scale > 0) {
        sx = rng.uniform(1.0 - params.max_scale, 1.0 + params.max_scale);
        sy = rng.uniform(1.0 - params.max_scale, 1.0 + params.max_scale);
    }
    if (params.max_translate > 0) {
        tx = rng.uniform(-params.max_translate * w, params.max_translate * w);
        ty = rng.uniform(-params.max_translate * h, params.max_translate * h);
    }

    const double rad = theta * std::numbers::pi / 180.0;
    const double c = std::cos(rad), s = std::sin(rad);
    // forward linear part A = diag(sx, sy) * R(theta); invert for out -> src
    const double a00 = sx * c, a01 = -sx * s;
    const double a10 = sy * s, a11 = sy * c;
    const double det = a00 * a11 - a01 * a10;
    if (det == 0.0) throw StateError("sample_affine: degenerate transform");
    const double i00 = a11 / det, i01 = -a01 / det;
    const double i10 = -a10 / det, i11 = a00 / det;

    const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
    AffineTransform t;
    t.m00 = i00;
    t.m01 = i01;
    t.m10 = i10;
    t.m11 = i11;
    // p_src = Ainv * (p_out - center - translation) + center
    t.m02 = cx - i00 * (cx + tx) - i01 * (cy + ty);
    t.m12 = cy - i10 * (cx + tx) - i11 * (cy + ty);
    return t;
}

Tensor apply_affine(const Tensor& image, const AffineTransform& t, double fill, bool edge_clamp) {
    require_image(image, "apply_affine");
    const double det = t.m00 * t.m11 - t.m01 * t.m10;
    if (det == 0.0) throw StateError("apply_affine: transform is not invertible");
    const int h = image.extent(1), w = image.extent(2);
    std::vector<double> xs(static_cast<std::size_t>(h) * w), ys(xs.size());
    std::size_t p = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x, ++p) t.apply(x, y, xs[p], ys[p]);
    return resample(image, xs, ys, fill, edge_clamp);
}

Tensor gaussian_blur(const Tensor& image, int radius, double sigma) {
    require_image(image, "gaussian_blur");
    if (radius < 1) throw ShapeError("gaussian_blur: radius must be >= 1");
    if (!(sigma > 0)) throw ShapeError("gaussian_blur: sigma must be positive");

    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    for (int i = -radius; i <= radius; ++i)
        kernel[static_cast<std::size_t>(i + radius)] = std::exp(-(i * i) / (2.0 * sigma * sigma));

    const int m = image.extent(0), h = image.extent(1), w = image.extent(2);
    Tensor tmp(image.shape());
    Tensor out(image.shape());
    // separable passes; renormalizing each axis over its in-bounds taps is
    // identical to renormalizing the 2D kernel over the in-bounds window
    for (int i = 0; i < m; ++i) {
        const double* src = image.data() + static_cast<std::size_t>(i) * h * w;
        double* mid = tmp.data() + static_cast<std::size_t>(i) * h * w;
        double* dst = out.data() + static_cast<std::size_t>(i) * h * w;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0, norm = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int xx = x + k;
                    if (xx < 0 || xx >= w) continue;
                    const double kv = kernel[static_cast<std::size_t>(k + radius)];
                    acc += kv * src[static_cast<std::size_t>(y) * w + xx];
                    norm += kv;
                }
                mid[static_cast<std::size_t>(y) * w + x] = acc / norm;
            }
        }
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0, norm = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int yy = y + k;
                    if (yy < 0 || yy >= h) continue;
                    const double kv = kernel[static_cast<std::size_t>(k + radius)];
                    acc += kv * mid[static_cast<std::size_t>(yy) * w + x];
                    norm += kv;
                }
                dst[static_cast<std::size_t>(y) * w + x] = acc / norm;
            }
        }
    }
    return out;
}

Tensor elastic_distort(Rng& rng, const Tensor& image, double sigma, double alpha, double fill) {
    require_image(image, "elastic_distort");
    if (!(sigma > 0)) throw ShapeError("elastic_distort: sigma must be positive");
    const int h = image.extent(1), w = image.extent(2);

    Tensor dx({1, h, w});
    Tensor dy({1, h, w});
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] = rng.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < dy.size(); ++i) dy[i] = rng.uniform(-1.0, 1.0);

    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    dx = gaussian_blur(dx, radius, sigma);
    dy = gaussian_blur(dy, radius, sigma);

    std::vector<double> xs(static_cast<std::size_t>(h) * w), ys(xs.size());
    std::size_t p = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x, ++p) {
            xs[p] = x + alpha * dx[p];
            ys[p] = y + alpha * dy[p];
        }
    }
    return resample(image, xs, ys, fill, false);
}

Tensor distort_image(Rng& rng, const Tensor& image, const DistortionParams& params) {
    Tensor out = image;
    if (params.affine_active()) {
        const AffineTransform t = sample_affine(rng, params, out.extent(1), out.extent(2));
        out = apply_affine(out, t, params.fill, params.edge_clamp);
    }
    if (params.elastic_active())
        out = elastic_distort(rng, out, params.elastic_sigma, params.elastic_alpha, params.fill);
    if (params.blur_active()) out = gaussian_blur(out, params.blur_radius, params.blur_sigma);
    return out;
}

} // namespace mcdnn
