#include "mcdnn/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "mcdnn/augment.hpp"

namespace mcdnn {

namespace {

constexpr int kBins = 256;

void require_plane(const Tensor& t, const char* who) {
    if (t.rank() != 3 || t.extent(0) != 1)
        throw ShapeError(std::string(who) + ": expected a single intensity plane [1,h,w]");
}

int bin_of(double v) {
    const int b = static_cast<int>(std::floor((v - kIntensityLo) / (kIntensityHi - kIntensityLo) * kBins));
    return std::clamp(b, 0, kBins - 1);
}

double bin_to_value(double cdf) {
    return kIntensityLo + (kIntensityHi - kIntensityLo) * cdf;
}

// inclusive normalized CDF of one pixel range
std::vector<double> cdf_of(const double* px, std::size_t n) {
    std::vector<double> cdf(kBins, 0.0);
    for (std::size_t i = 0; i < n; ++i) cdf[static_cast<std::size_t>(bin_of(px[i]))] += 1.0;
    double run = 0.0;
    for (double& c : cdf) {
        run += c;
        c = run / static_cast<double>(n);
    }
    return cdf;
}

Tensor resize_bilinear(const Tensor& image, int oh, int ow) {
    const int m = image.extent(0), h = image.extent(1), w = image.extent(2);
    Tensor out({m, oh, ow});
    const double sy = static_cast<double>(h) / oh, sx = static_cast<double>(w) / ow;
    for (int i = 0; i < m; ++i) {
        const double* src = image.data() + static_cast<std::size_t>(i) * h * w;
        double* dst = out.data() + static_cast<std::size_t>(i) * oh * ow;
        for (int y = 0; y < oh; ++y) {
            const double ys = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(h - 1));
            const int y0 = static_cast<int>(std::floor(ys));
            const int y1 = std::min(y0 + 1, h - 1);
            const double fy = ys - y0;
            for (int x = 0; x < ow; ++x) {
                const double xs = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(w - 1));
                const int x0 = static_cast<int>(std::floor(xs));
                const int x1 = std::min(x0 + 1, w - 1);
                const double fx = xs - x0;
                const double v = (1 - fy) * ((1 - fx) * src[static_cast<std::size_t>(y0) * w + x0] +
                                             fx * src[static_cast<std::size_t>(y0) * w + x1]) +
                                 fy * ((1 - fx) * src[static_cast<std::size_t>(y1) * w + x0] +
                                       fx * src[static_cast<std::size_t>(y1) * w + x1]);
                dst[static_cast<std::size_t>(y) * ow + x] = v;
            }
        }
    }
    return out;
}

// per-channel transform for 1-map images, L-channel transform for RGB
template <typename PlaneOp>
Tensor intensity_op(const Tensor& image, PlaneOp&& op) {
    if (image.rank() != 3) throw ShapeError("intensity op: expected a [maps,h,w] image");
    if (image.extent(0) == 1) return op(image);
    if (image.extent(0) == 3) {
        const Tensor lab = rgb_to_lab(image);
        return lab_to_rgb(apply_on_l(lab, op));
    }
    throw ShapeError("intensity op: expected 1 or 3 channels");
}

// sRGB <-> linear
double srgb_decode(double s) {
    return s <= 0.04045 ? s / 12.92 : std::pow((s + 0.055) / 1.055, 2.4);
}
double srgb_encode(double lin) {
    return lin <= 0.0031308 ? 12.92 * lin : 1.055 * std::pow(lin, 1.0 / 2.4) - 0.055;
}

// sRGB D65 linear-light matrix; the inverse is computed from it exactly so
// the rgb -> lab -> rgb round trip only loses float rounding
constexpr double kRgbToXyz[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                                    {0.2126729, 0.7151522, 0.0721750},
                                    {0.0193339, 0.1191920, 0.9503041}};

// white point = matrix row sums, so the neutral axis lands on a = b = 0
// exactly despite the rounded published coefficients
constexpr double kXn = kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2];
constexpr double kYn = kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2];
constexpr double kZn = kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2];

struct XyzToRgb {
    double m[3][3];
    XyzToRgb() {
        const auto& a = kRgbToXyz;
        const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        m[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
        m[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
        m[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
        m[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
        m[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
        m[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
        m[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
        m[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
        m[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
    }
};

const XyzToRgb kXyzToRgb;

double lab_f(double t) {
    constexpr double d = 6.0 / 29.0;
    return t > d * d * d ? std::cbrt(t) : t / (3.0 * d * d) + 4.0 / 29.0;
}
double lab_f_inv(double ft) {
    constexpr double d = 6.0 / 29.0;
    return ft > d ? ft * ft * ft : 3.0 * d * d * (ft - 4.0 / 29.0);
}

} // namespace

Tensor width_normalize(const Tensor& image, int target_width, int canvas_h, int canvas_w) {
    require_plane(image, "width_normalize");
    if (target_width < 1) throw ShapeError("width_normalize: target width must be >= 1");
    const int h = image.extent(1), w = image.extent(2);
    if (canvas_h <= 0) canvas_h = h;
    if (canvas_w <= 0) canvas_w = w;

    // foreground = intensity above 10% of the peak, in [0,1] intensity terms
    double peak = kIntensityLo;
    for (std::size_t i = 0; i < image.size(); ++i) peak = std::max(peak, image[i]);
    const double peak01 = (peak - kIntensityLo) / (kIntensityHi - kIntensityLo);
    const double thr = kIntensityLo + 0.1 * peak01 * (kIntensityHi - kIntensityLo);
    int r0 = h, r1 = -1, c0 = w, c1 = -1;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (image.at3(0, y, x) > thr && image.at3(0, y, x) > kIntensityLo) {
                r0 = std::min(r0, y);
                r1 = std::max(r1, y);
                c0 = std::min(c0, x);
                c1 = std::max(c1, x);
            }
    if (r1 < 0) throw DataError("width_normalize: blank image, no foreground found");

    const int box_w = c1 - c0 + 1, box_h = r1 - r0 + 1;
    const double scale_x = static_cast<double>(target_width) / box_w;
    // floor-anchored placement: the scaled box starts at integer offsets, so
    // an integer scale resamples at integer coordinates (exact copies)
    const int new_c0 = (canvas_w - target_width) / 2;
    const int new_r0 = (canvas_h - box_h) / 2;

    Tensor out({1, canvas_h, canvas_w});
    for (int y = 0; y < canvas_h; ++y) {
        const double ys = r0 + (y - new_r0); // height scale stays 1
        for (int x = 0; x < canvas_w; ++x) {
            const double xs = c0 + (x - new_c0) / scale_x;
            const double xf = std::floor(xs), yf = std::floor(ys);
            const int x0 = static_cast<int>(xf), y0 = static_cast<int>(yf);
            const double fx = xs - xf, fy = ys - yf;
            auto tap = [&](int yy, int xx) {
                return (xx < 0 || xx >= w || yy < 0 || yy >= h) ? kBackground
                                                                : image.at3(0, yy, xx);
            };
            out.at3(0, y, x) = (1 - fy) * ((1 - fx) * tap(y0, x0) + fx * tap(y0, x0 + 1)) +
                               fy * ((1 - fx) * tap(y0 + 1, x0) + fx * tap(y0 + 1, x0 + 1));
        }
    }
    return out;
}

Tensor resize_center(const Tensor& image, int inner_extent, int outer_extent) {
    if (image.rank() != 3) throw ShapeError("resize_center: expected a [maps,h,w] image");
    if (inner_extent < 1 || outer_extent < 1)
        throw ShapeError("resize_center: extents must be positive");
    if (inner_extent > outer_extent)
        throw ShapeError("resize_center: inner extent " + std::to_string(inner_extent) +
                         " exceeds outer extent " + std::to_string(outer_extent));
    const Tensor inner = resize_bilinear(image, inner_extent, inner_extent);
    if (inner_extent == outer_extent) return inner;

    const int m = image.extent(0);
    Tensor out({m, outer_extent, outer_extent}, kBackground);
    const int off = (outer_extent - inner_extent) / 2;
    for (int i = 0; i < m; ++i)
        for (int y = 0; y < inner_extent; ++y)
            for (int x = 0; x < inner_extent; ++x)
                out.at3(i, y + off, x + off) = inner.at3(i, y, x);
    return out;
}

Tensor imadjust(const Tensor& image) {
    require_plane(image, "imadjust");
    const std::size_t n = image.size();
    std::vector<double> sorted(image.data(), image.data() + n);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t k = static_cast<std::size_t>(std::floor(0.01 * static_cast<double>(n)));
    const double lo = sorted[k];
    const double hi = sorted[n - 1 - k];
    Tensor out = image;
    if (!(hi > lo)) {
        // degenerate histogram: constant mid-range image
        out.fill(0.5 * (kIntensityLo + kIntensityHi));
        return out;
    }
    const double span = kIntensityHi - kIntensityLo;
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::clamp(kIntensityLo + span * (out[i] - lo) / (hi - lo), kIntensityLo, kIntensityHi);
    return out;
}

Tensor histeq(const Tensor& image) {
    require_plane(image, "histeq");
    const auto cdf = cdf_of(image.data(), image.size());
    Tensor out = image;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = bin_to_value(cdf[static_cast<std::size_t>(bin_of(out[i]))]);
    return out;
}

Tensor adapthisteq(const Tensor& image, int tile_h, int tile_w) {
    require_plane(image, "adapthisteq");
    const int h = image.extent(1), w = image.extent(2);
    if (tile_h < 1 || tile_w < 1 || h % tile_h != 0 || w % tile_w != 0)
        throw ShapeError("adapthisteq: tile " + std::to_string(tile_h) + "x" + std::to_string(tile_w) +
                         " does not divide image " + std::to_string(h) + "x" + std::to_string(w));
    const int nty = h / tile_h, ntx = w / tile_w;

    std::vector<std::vector<double>> cdfs(static_cast<std::size_t>(nty) * ntx);
    std::vector<double> tile(static_cast<std::size_t>(tile_h) * tile_w);
    for (int ty = 0; ty < nty; ++ty) {
        for (int tx = 0; tx < ntx; ++tx) {
            std::size_t q = 0;
            for (int y = 0; y < tile_h; ++y)
                for (int x = 0; x < tile_w; ++x)
                    tile[q++] = image.at3(0, ty * tile_h + y, tx * tile_w + x);
            cdfs[static_cast<std::size_t>(ty) * ntx + tx] = cdf_of(tile.data(), tile.size());
        }
    }

    Tensor out = image;
    for (int y = 0; y < h; ++y) {
        const double gy = (y + 0.5) / tile_h - 0.5;
        const int ty0 = std::clamp(static_cast<int>(std::floor(gy)), 0, nty - 1);
        const int ty1 = std::min(ty0 + 1, nty - 1);
        const double fy = std::clamp(gy - ty0, 0.0, 1.0);
        for (int x = 0; x < w; ++x) {
            const double gx = (x + 0.5) / tile_w - 0.5;
            const int tx0 = std::clamp(static_cast<int>(std::floor(gx)), 0, ntx - 1);
            const int tx1 = std::min(tx0 + 1, ntx - 1);
            const double fx = std::clamp(gx - tx0, 0.0, 1.0);

            const int b = bin_of(image.at3(0, y, x));
            const double v00 = cdfs[static_cast<std::size_t>(ty0) * ntx + tx0][static_cast<std::size_t>(b)];
            const double v01 = cdfs[static_cast<std::size_t>(ty0) * ntx + tx1][static_cast<std::size_t>(b)];
            const double v10 = cdfs[static_cast<std::size_t>(ty1) * ntx + tx0][static_cast<std::size_t>(b)];
            const double v11 = cdfs[static_cast<std::size_t>(ty1) * ntx + tx1][static_cast<std::size_t>(b)];
            const double cdf = (1 - fy) * ((1 - fx) * v00 + fx * v01) + fy * ((1 - fx) * v10 + fx * v11);
            out.at3(0, y, x) = bin_to_value(cdf);
        }
    }
    return out;
}

Tensor dog_kernel(int filter_size, double sigma_narrow, double sigma_wide) {
    if (filter_size < 3 || filter_size % 2 == 0)
        throw ShapeError("dog_kernel: filter size must be odd and >= 3");
    const int r = filter_size / 2;
    Tensor k({filter_size, filter_size});
    double sum_n = 0.0, sum_w = 0.0;
    std::vector<double> gn(k.size()), gw(k.size());
    std::size_t q = 0;
    for (int y = -r; y <= r; ++y) {
        for (int x = -r; x <= r; ++x, ++q) {
            const double d2 = static_cast<double>(x * x + y * y);
            gn[q] = std::exp(-d2 / (2.0 * sigma_narrow * sigma_narrow));
            gw[q] = std::exp(-d2 / (2.0 * sigma_wide * sigma_wide));
            sum_n += gn[q];
            sum_w += gw[q];
        }
    }
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = gn[i] / sum_n - gw[i] / sum_w;
    return k;
}

Tensor dog_response(const Tensor& image, int filter_size, double sigma_narrow, double sigma_wide) {
    if (image.rank() != 3) throw ShapeError("dog_response: expected a [maps,h,w] image");
    if (filter_size < 3 || filter_size % 2 == 0)
        throw ShapeError("dog_response: filter size must be odd and >= 3");
    const int r = filter_size / 2;
    const Tensor narrow = gaussian_blur(image, r, sigma_narrow);
    const Tensor wide = gaussian_blur(image, r, sigma_wide);
    Tensor out = narrow;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= wide[i];
    return out;
}

Tensor conorm(const Tensor& image, int filter_size, double sigma_narrow, double sigma_wide) {
    Tensor resp = dog_response(image, filter_size, sigma_narrow, sigma_wide);
    double lo = resp[0], hi = resp[0];
    for (std::size_t i = 0; i < resp.size(); ++i) {
        lo = std::min(lo, resp[i]);
        hi = std::max(hi, resp[i]);
    }
    if (!(hi - lo > 1e-12)) {
        // flat response (constant input): rescale to mid-range
        resp.fill(0.5 * (kIntensityLo + kIntensityHi));
        return resp;
    }
    const double span = kIntensityHi - kIntensityLo;
    for (std::size_t i = 0; i < resp.size(); ++i)
        resp[i] = kIntensityLo + span * (resp[i] - lo) / (hi - lo);
    return resp;
}

Tensor rgb_to_lab(const Tensor& image) {
    if (image.rank() != 3 || image.extent(0) != 3)
        throw ShapeError("rgb_to_lab: expected a 3-channel image");
    const int h = image.extent(1), w = image.extent(2);
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    Tensor out(image.shape());
    for (std::size_t i = 0; i < plane; ++i) {
        const double r = srgb_decode((image[i] - kIntensityLo) / (kIntensityHi - kIntensityLo));
        const double g = srgb_decode((image[plane + i] - kIntensityLo) / (kIntensityHi - kIntensityLo));
        const double b = srgb_decode((image[2 * plane + i] - kIntensityLo) / (kIntensityHi - kIntensityLo));

        const double x = kRgbToXyz[0][0] * r + kRgbToXyz[0][1] * g + kRgbToXyz[0][2] * b;
        const double y = kRgbToXyz[1][0] * r + kRgbToXyz[1][1] * g + kRgbToXyz[1][2] * b;
        const double z = kRgbToXyz[2][0] * r + kRgbToXyz[2][1] * g + kRgbToXyz[2][2] * b;

        const double fx = lab_f(x / kXn), fy = lab_f(y / kYn), fz = lab_f(z / kZn);
        out[i] = 116.0 * fy - 16.0;
        out[plane + i] = 500.0 * (fx - fy);
        out[2 * plane + i] = 200.0 * (fy - fz);
    }
    return out;
}

Tensor lab_to_rgb(const Tensor& image) {
    if (image.rank() != 3 || image.extent(0) != 3)
        throw ShapeError("lab_to_rgb: expected a 3-channel image");
    const int h = image.extent(1), w = image.extent(2);
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    Tensor out(image.shape());
    for (std::size_t i = 0; i < plane; ++i) {
        const double fy = (image[i] + 16.0) / 116.0;
        const double fx = fy + image[plane + i] / 500.0;
        const double fz = fy - image[2 * plane + i] / 200.0;
        const double x = kXn * lab_f_inv(fx);
        const double y = kYn * lab_f_inv(fy);
        const double z = kZn * lab_f_inv(fz);

        const auto& m = kXyzToRgb.m;
        const double r = m[0][0] * x + m[0][1] * y + m[0][2] * z;
        const double g = m[1][0] * x + m[1][1] * y + m[1][2] * z;
        const double b = m[2][0] * x + m[2][1] * y + m[2][2] * z;

        const double span = kIntensityHi - kIntensityLo;
        out[i] = std::clamp(kIntensityLo + span * srgb_encode(r), kIntensityLo, kIntensityHi);
        out[plane + i] = std::clamp(kIntensityLo + span * srgb_encode(g), kIntensityLo, kIntensityHi);
        out[2 * plane + i] = std::clamp(kIntensityLo + span * srgb_encode(b), kIntensityLo, kIntensityHi);
    }
    return out;
}

namespace {

std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

int to_int(const std::string& s, const std::string& step) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("bad integer '" + s + "' in preprocessor step '" + step + "'");
    }
}

double to_double(const std::string& s, const std::string& step) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("bad number '" + s + "' in preprocessor step '" + step + "'");
    }
}

PreStep parse_step(const std::string& text) {
    const auto parts = split_on(text, ':');
    const std::string& head = parts[0];
    PreStep step;
    if (head == "original") {
        step.kind = PreKind::Original;
        if (parts.size() != 1) throw ParseError("step 'original' takes no arguments");
    } else if (head.size() > 1 && head[0] == 'w' &&
               std::all_of(head.begin() + 1, head.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        step.kind = PreKind::WidthNorm;
        step.a = to_int(head.substr(1), text);
        if (step.a < 1) throw ParseError("width target must be >= 1 in step '" + text + "'");
    } else if (head == "imadjust") {
        step.kind = PreKind::Imadjust;
    } else if (head == "histeq") {
        step.kind = PreKind::Histeq;
    } else if (head == "adapthisteq") {
        step.kind = PreKind::Adapthisteq;
        step.a = parts.size() > 1 ? to_int(parts[1], text) : 6;
        step.b = parts.size() > 2 ? to_int(parts[2], text) : step.a;
        if (parts.size() > 3) throw ParseError("too many arguments in step '" + text + "'");
    } else if (head == "conorm") {
        step.kind = PreKind::Conorm;
        step.a = parts.size() > 1 ? to_int(parts[1], text) : 5;
        if (parts.size() > 2) throw ParseError("too many arguments in step '" + text + "'");
        if (step.a % 2 == 0) throw ParseError("conorm filter size must be odd in step '" + text + "'");
    } else if (head == "resize") {
        if (parts.size() != 3) throw ParseError("step 'resize' needs inner and outer extents, got '" + text + "'");
        step.kind = PreKind::ResizeCenter;
        step.a = to_int(parts[1], text);
        step.b = to_int(parts[2], text);
    } else if (head == "blur") {
        if (parts.size() != 3) throw ParseError("step 'blur' needs radius and sigma, got '" + text + "'");
        step.kind = PreKind::Blur;
        step.a = to_int(parts[1], text);
        step.sigma = to_double(parts[2], text);
    } else {
        throw ParseError("unknown preprocessor step '" + text + "'");
    }
    return step;
}

} // namespace

PreChain parse_chain(const std::string& text) {
    if (text.empty()) throw ParseError("empty preprocessor chain");
    PreChain chain;
    for (const std::string& part : split_on(text, '+')) chain.push_back(parse_step(part));
    return chain;
}

std::string format_chain(const PreChain& chain) {
    if (chain.empty()) throw ParseError("empty preprocessor chain");
    std::ostringstream out;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i) out << '+';
        const PreStep& s = chain[i];
        switch (s.kind) {
        case PreKind::Original: out << "original"; break;
        case PreKind::WidthNorm: out << 'w' << s.a; break;
        case PreKind::Imadjust: out << "imadjust"; break;
        case PreKind::Histeq: out << "histeq"; break;
        case PreKind::Adapthisteq: out << "adapthisteq:" << s.a << ':' << s.b; break;
        case PreKind::Conorm: out << "conorm:" << s.a; break;
        case PreKind::ResizeCenter: out << "resize:" << s.a << ':' << s.b; break;
        case PreKind::Blur: out << "blur:" << s.a << ':' << s.sigma; break;
        }
    }
    return out.str();
}

Tensor apply_chain(const Tensor& image, const PreChain& chain, int canvas_h, int canvas_w) {
    if (chain.empty()) throw ParseError("empty preprocessor chain");
    Tensor cur = image;
    for (const PreStep& s : chain) {
        switch (s.kind) {
        case PreKind::Original: break;
        case PreKind::WidthNorm: cur = width_normalize(cur, s.a, canvas_h, canvas_w); break;
        case PreKind::Imadjust: cur = intensity_op(cur, [](const Tensor& p) { return imadjust(p); }); break;
        case PreKind::Histeq: cur = intensity_op(cur, [](const Tensor& p) { return histeq(p); }); break;
        case PreKind::Adapthisteq:
            cur = intensity_op(cur, [&](const Tensor& p) { return adapthisteq(p, s.a, s.b); });
            break;
        case PreKind::Conorm: {
            // per-channel, not through Lab
            const int m = cur.extent(0), h = cur.extent(1), w = cur.extent(2);
            Tensor next(cur.shape());
            for (int i = 0; i < m; ++i) {
                Tensor plane({1, h, w});
                std::copy_n(cur.data() + static_cast<std::size_t>(i) * h * w, plane.size(), plane.data());
                plane = conorm(plane, s.a);
                std::copy_n(plane.data(), plane.size(), next.data() + static_cast<std::size_t>(i) * h * w);
            }
            cur = std::move(next);
            break;
        }
        case PreKind::ResizeCenter: cur = resize_center(cur, s.a, s.b); break;
        case PreKind::Blur: cur = gaussian_blur(cur, s.a, s.sigma); break;
        }
    }
    return cur;
}

} // namespace mcdnn
