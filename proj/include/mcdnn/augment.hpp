#pragma once

#include "mcdnn/rng.hpp"
#include "mcdnn/tensor.hpp"

namespace mcdnn {

/// Bounds for the per-epoch random distortion of training images. All bounds
/// default to zero, which makes the distortion the identity.
struct DistortionParams {
    double max_translate = 0.0; // fraction of the image extent, per axis
    double max_rotate = 0.0;    // degrees
    double max_scale = 0.0;     // scale factors drawn from [1-s, 1+s] per axis
    double elastic_sigma = 0.0; // pixels; 0 disables the elastic field
    double elastic_alpha = 0.0; // displacement scale in pixels
    int blur_radius = 0;        // 0 disables smoothing
    double blur_sigma = 0.0;
    double fill = -1.0;         // background value for out-of-bounds samples
    bool edge_clamp = false;    // clamp to the border instead of filling

    bool affine_active() const { return max_translate > 0 || max_rotate > 0 || max_scale > 0; }
    bool elastic_active() const { return elastic_sigma > 0 && elastic_alpha > 0; }
    bool blur_active() const { return blur_radius > 0 && blur_sigma > 0; }
    bool any() const { return affine_active() || elastic_active() || blur_active(); }
};

/// 2x3 matrix mapping output pixel coordinates (x, y) to source coordinates,
/// anchored at the image center.
struct AffineTransform {
    double m00 = 1, m01 = 0, m02 = 0; // x_src = m00*x + m01*y + m02
    double m10 = 0, m11 = 1, m12 = 0; // y_src = m10*x + m11*y + m12

    static AffineTransform identity() { return {}; }
    void apply(double x, double y, double& xs, double& ys) const {
        xs = m00 * x + m01 * y + m02;
        ys = m10 * x + m11 * y + m12;
    }
};

/// Draw rotation ~ U[-max_rotate, max_rotate] degrees, per-axis scale
/// ~ U[1-s, 1+s] and per-axis translation ~ U[-t*extent, t*extent]; the
/// forward transform is scale(rotate(.)) about the image center followed by
/// the translation, and the returned matrix is its inverse (output -> source).
/// Draw order: rotation, scale x, scale y, translate x, translate y; bounds
/// that are zero consume no draws.
AffineTransform sample_affine(Rng& rng, const DistortionParams& params, int h, int w);

/// Bilinear resampling of all maps through the output -> source map. Samples
/// outside the source use fill, or the nearest border pixel when edge_clamp.
Tensor apply_affine(const Tensor& image, const AffineTransform& t, double fill = -1.0,
                    bool edge_clamp = false);

/// Per-axis displacement fields ~ U[-1,1] per pixel (x field first, then y,
/// row-major), smoothed by a Gaussian of std sigma, scaled by alpha, applied
/// by bilinear resampling.
Tensor elastic_distort(Rng& rng, const Tensor& image, double sigma, double alpha, double fill = -1.0);

/// Normalized discrete Gaussian over a (2*radius+1)^2 window; at the borders
/// the kernel is renormalized over the in-bounds taps.
Tensor gaussian_blur(const Tensor& image, int radius, double sigma);

/// The full D block for one image: affine, then elastic, then blur, each only
/// when its bounds are active.
Tensor distort_image(Rng& rng, const Tensor& image, const DistortionParams& params);

} // namespace mcdnn
