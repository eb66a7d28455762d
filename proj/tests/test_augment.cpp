#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mcdnn/augment.hpp"

using namespace mcdnn;

namespace {

Tensor random_image(Rng& rng, int m, int h, int w) {
    Tensor t({m, h, w});
    fill_uniform(t, rng, -1.0, 1.0);
    return t;
}

} // namespace

TEST_CASE("zero bounds give the identity transform") {
    Rng rng(1);
    DistortionParams params; // all zero
    const AffineTransform t = sample_affine(rng, params, 29, 29);
    CHECK(t.m00 == 1.0);
    CHECK(t.m01 == 0.0);
    CHECK(t.m02 == 0.0);
    CHECK(t.m10 == 0.0);
    CHECK(t.m11 == 1.0);
    CHECK(t.m12 == 0.0);

    const Tensor img = random_image(rng, 2, 9, 9);
    const Tensor out = apply_affine(img, t);
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(out[i] == img[i]); // bit-exact

    const Tensor d = distort_image(rng, img, params);
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(d[i] == img[i]);
}

TEST_CASE("translation-only transforms keep an identity linear part") {
    Rng rng(2);
    DistortionParams params;
    params.max_translate = 0.2;
    for (int i = 0; i < 20; ++i) {
        const AffineTransform t = sample_affine(rng, params, 29, 29);
        CHECK(t.m00 == 1.0);
        CHECK(t.m01 == 0.0);
        CHECK(t.m10 == 0.0);
        CHECK(t.m11 == 1.0);
    }
}

TEST_CASE("sampled transforms respect their configured bounds") {
    struct Config {
        double translate, rotate, scale;
        int extent;
    };
    // the digit, rgb and stereo training setups
    const Config configs[] = {{0.075, 7.5, 0.075, 29}, {0.15, 5.0, 0.15, 32}, {0.15, 15.0, 0.15, 48}};

    for (const Config& c : configs) {
        DistortionParams params;
        params.max_translate = c.translate;
        params.max_rotate = c.rotate;
        params.max_scale = c.scale;
        Rng rng(991);
        for (int i = 0; i < 10000; ++i) {
            const AffineTransform t = sample_affine(rng, params, c.extent, c.extent);
            // recover the forward transform from the stored inverse
            const double det = t.m00 * t.m11 - t.m01 * t.m10;
            const double a00 = t.m11 / det, a01 = -t.m01 / det;
            const double a10 = -t.m10 / det, a11 = t.m00 / det;
            const double sx = std::hypot(a00, a01);
            const double sy = std::hypot(a10, a11);
            const double theta = std::atan2(a10 / sy, a11 / sy) * 180.0 / 3.14159265358979323846;
            CHECK(std::abs(theta) <= c.rotate + 1e-9);
            CHECK(sx >= 1.0 - c.scale - 1e-9);
            CHECK(sx <= 1.0 + c.scale + 1e-9);
            CHECK(sy >= 1.0 - c.scale - 1e-9);
            CHECK(sy <= 1.0 + c.scale + 1e-9);
            // src(center) = center - A_inv * t  =>  t = A * (center - src(center))
            const double cx = (c.extent - 1) / 2.0, cy = cx;
            double xs, ys;
            t.apply(cx, cy, xs, ys);
            const double dx = cx - xs, dy = cy - ys;
            const double fwd_tx = a00 * dx + a01 * dy;
            const double fwd_ty = a10 * dx + a11 * dy;
            CHECK(std::abs(fwd_tx) <= c.translate * c.extent + 1e-9);
            CHECK(std::abs(fwd_ty) <= c.translate * c.extent + 1e-9);
        }
    }
}

TEST_CASE("integer translation moves an impulse exactly") {
    Tensor img({1, 9, 9}, 0.0);
    img.at3(0, 4, 4) = 1.0;
    // forward translation by +1 in x: out(x) = in(x - 1)
    AffineTransform t = AffineTransform::identity();
    t.m02 = -1.0;
    const Tensor out = apply_affine(img, t, 0.0);
    CHECK(out.at3(0, 4, 5) == 1.0);
    CHECK(out.at3(0, 4, 4) == 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) sum += out[i];
    CHECK(sum == 1.0);
}

TEST_CASE("quarter rotation of an asymmetric pattern matches the hand-rotated image") {
    // pattern occupies the center 3x3 of a 5x5 plane
    Tensor img({1, 5, 5}, 0.0);
    img.at3(0, 1, 1) = 1.0;
    img.at3(0, 1, 2) = 2.0;
    img.at3(0, 1, 3) = 3.0;
    img.at3(0, 2, 3) = 4.0;
    img.at3(0, 3, 3) = 5.0;

    // rotate 90 degrees about the center: forward (x,y) -> (cx - (y-cy), cy + (x-cx));
    // the output->source map is its inverse
    AffineTransform t;
    t.m00 = 0.0;
    t.m01 = 1.0;
    t.m02 = 0.0;
    t.m10 = -1.0;
    t.m11 = 0.0;
    t.m12 = 4.0;

    const Tensor out = apply_affine(img, t, 0.0);
    Tensor expect({1, 5, 5}, 0.0);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) {
            const int xr = 2 - (y - 2), yr = 2 + (x - 2);
            expect.at3(0, yr, xr) = img.at3(0, y, x);
        }
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("distortion preserves image shape") {
    Rng rng(9);
    DistortionParams params;
    params.max_translate = 0.15;
    params.max_rotate = 15.0;
    params.max_scale = 0.15;
    params.elastic_sigma = 4.0;
    params.elastic_alpha = 10.0;
    for (int trial = 0; trial < 5; ++trial) {
        const Tensor img = random_image(rng, 3, 16, 16);
        const Tensor out = distort_image(rng, img, params);
        CHECK(out.shape() == img.shape());
    }
}

TEST_CASE("elastic distortion basics") {
    Rng rng(10);
    const Tensor img = random_image(rng, 1, 12, 12);

    // alpha 0 leaves the image untouched
    Rng r2(11);
    const Tensor same = elastic_distort(r2, img, 4.0, 0.0);
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(same[i] == img[i]);

    // bilinear convexity: outputs stay inside the input value range when the
    // image contains the fill value
    Tensor with_bg = img;
    with_bg.at3(0, 0, 0) = -1.0;
    double lo = 1e9, hi = -1e9;
    for (std::size_t i = 0; i < with_bg.size(); ++i) {
        lo = std::min(lo, with_bg[i]);
        hi = std::max(hi, with_bg[i]);
    }
    Rng r3(12);
    const Tensor warped = elastic_distort(r3, with_bg, 2.0, 8.0, -1.0);
    for (std::size_t i = 0; i < warped.size(); ++i) {
        CHECK(warped[i] >= lo - 1e-12);
        CHECK(warped[i] <= hi + 1e-12);
    }
}

TEST_CASE("smoothing widens the displacement-field autocorrelation") {
    // 100x100 U[-1,1] fields smoothed with sigma 1 vs sigma 6
    auto lag_corr = [](const Tensor& f, int lag) {
        const int h = f.extent(1), w = f.extent(2);
        double mean = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) mean += f[i];
        mean /= static_cast<double>(f.size());
        double num = 0.0, den = 0.0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double a = f.at3(0, y, x) - mean;
                den += a * a;
                if (x + lag < w) num += a * (f.at3(0, y, x + lag) - mean);
            }
        return num / den;
    };

    auto smoothed_field = [](std::uint64_t seed, double sigma) {
        Rng rng(seed);
        Tensor field({1, 100, 100});
        for (std::size_t i = 0; i < field.size(); ++i) field[i] = rng.uniform(-1.0, 1.0);
        const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
        return gaussian_blur(field, radius, sigma);
    };

    const double corr_narrow = lag_corr(smoothed_field(77, 1.0), 3);
    const double corr_wide = lag_corr(smoothed_field(77, 6.0), 3);
    CHECK(corr_wide > corr_narrow);
    CHECK(corr_wide > 0.8); // sigma 6 keeps lag-3 neighbours strongly coupled
}

TEST_CASE("gaussian blur kernel properties") {
    // constant image is a fixed point (kernel sums to one, including borders)
    Tensor flat({1, 7, 7}, 0.25);
    const Tensor out = gaussian_blur(flat, 1, 0.75);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == doctest::Approx(0.25).epsilon(1e-12));

    // the 3x3 sigma 0.75 kernel: weights sum to 1 and the impulse response at
    // the image center reproduces the kernel
    double k[3][3];
    double sum = 0.0;
    for (int u = -1; u <= 1; ++u)
        for (int v = -1; v <= 1; ++v) {
            k[u + 1][v + 1] = std::exp(-(u * u + v * v) / (2.0 * 0.75 * 0.75));
            sum += k[u + 1][v + 1];
        }
    for (auto& row : k)
        for (double& x : row) x /= sum;
    double check = 0.0;
    for (auto& row : k)
        for (double x : row) check += x;
    CHECK(check == doctest::Approx(1.0).epsilon(1e-12));

    Tensor impulse({1, 9, 9}, 0.0);
    impulse.at3(0, 4, 4) = 1.0;
    const Tensor resp = gaussian_blur(impulse, 1, 0.75);
    for (int u = -1; u <= 1; ++u)
        for (int v = -1; v <= 1; ++v)
            CHECK(resp.at3(0, 4 + u, 4 + v) == doctest::Approx(k[u + 1][v + 1]).epsilon(1e-12));

    CHECK_THROWS_AS(gaussian_blur(flat, 0, 0.75), ShapeError);
    CHECK_THROWS_AS(gaussian_blur(flat, 1, 0.0), ShapeError);
}

TEST_CASE("distortion draws are deterministic under a fixed seed") {
    DistortionParams params;
    params.max_translate = 0.1;
    params.max_rotate = 10.0;
    params.max_scale = 0.1;
    params.elastic_sigma = 3.0;
    params.elastic_alpha = 6.0;
    Rng imgrng(55);
    const Tensor img = random_image(imgrng, 1, 15, 15);
    Rng a(99), b(99);
    const Tensor da = distort_image(a, img, params);
    const Tensor db = distort_image(b, img, params);
    for (std::size_t i = 0; i < da.size(); ++i) CHECK(da[i] == db[i]);
}
