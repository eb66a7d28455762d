#pragma once

#include <string>
#include <vector>

#include "mcdnn/tensor.hpp"

namespace mcdnn {

// Canonical intensity range of all images in this library.
inline constexpr double kIntensityLo = -1.0;
inline constexpr double kIntensityHi = 1.0;
inline constexpr double kBackground = -1.0;

enum class PreKind {
    Original,
    WidthNorm,    // a = target width in pixels
    Imadjust,
    Histeq,
    Adapthisteq,  // a x b tile size
    Conorm,       // a = filter size (odd)
    ResizeCenter, // a = inner, b = outer extent
    Blur,         // a = radius, sigma
};

struct PreStep {
    PreKind kind = PreKind::Original;
    int a = 0;
    int b = 0;
    double sigma = 0.0;

    bool operator==(const PreStep&) const = default;
};

/// A preprocessor is a non-empty chain of steps applied left to right.
using PreChain = std::vector<PreStep>;

/// Chain grammar, steps joined by '+':
///   original | w<target> | imadjust | histeq | adapthisteq[:TH:TW] |
///   conorm[:SIZE] | resize:<inner>:<outer> | blur:<radius>:<sigma>
/// Defaults: adapthisteq tiles 6x6, conorm size 5.
PreChain parse_chain(const std::string& text);
std::string format_chain(const PreChain& chain);

/// Run a chain over one image. canvas_h/canvas_w give the target canvas for
/// width normalization (0 keeps the image extent).
Tensor apply_chain(const Tensor& image, const PreChain& chain, int canvas_h = 0, int canvas_w = 0);

// --- geometric normalizations -------------------------------------------

/// Rescale the foreground bounding box to the target width (height scale 1,
/// preserving the source box normalization) and re-center it on the canvas.
/// Foreground = pixels brighter than 10% of the peak intensity.
Tensor width_normalize(const Tensor& image, int target_width, int canvas_h = 0, int canvas_w = 0);

/// Bilinear resize to inner x inner, pasted centered on an outer x outer
/// canvas of background fill.
Tensor resize_center(const Tensor& image, int inner_extent, int outer_extent);

// --- contrast normalizations (single intensity plane in [-1,1]) ----------

/// Saturate the 1% low/high intensity tails: percentiles at k = floor(0.01*n)
/// from either end map linearly onto the full range and clamp outside.
Tensor imadjust(const Tensor& image);

/// Map every pixel through the normalized cumulative histogram (256 bins).
Tensor histeq(const Tensor& image);

/// Per-tile histogram equalization with bilinear blending between the tile
/// mappings, so seams stay continuous. Tile extents must divide the image.
Tensor adapthisteq(const Tensor& image, int tile_h, int tile_w);

/// Difference-of-Gaussians edge enhancement (border-renormalized blurs with
/// the given window), min-max rescaled to [-1,1]; flat images map to 0.
Tensor conorm(const Tensor& image, int filter_size = 5, double sigma_narrow = 1.0,
              double sigma_wide = 2.0);

/// The zero-DC DoG kernel itself, for inspection and tests.
Tensor dog_kernel(int filter_size, double sigma_narrow = 1.0, double sigma_wide = 2.0);

/// Raw (unrescaled) DoG response.
Tensor dog_response(const Tensor& image, int filter_size, double sigma_narrow = 1.0,
                    double sigma_wide = 2.0);

// --- color space ----------------------------------------------------------

/// sRGB (D65) channels in [-1,1] -> CIE L*a*b*; L in [0,100], a/b unscaled.
Tensor rgb_to_lab(const Tensor& image);
Tensor lab_to_rgb(const Tensor& image);

/// Run an intensity-plane transform on the L channel of a Lab image, leaving
/// a and b untouched bit-exactly.
template <typename PlaneOp>
Tensor apply_on_l(const Tensor& lab, PlaneOp&& op) {
    if (lab.rank() != 3 || lab.extent(0) != 3)
        throw ShapeError("apply_on_l: expected a 3-channel Lab image");
    const int h = lab.extent(1), w = lab.extent(2);
    Tensor plane({1, h, w});
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = lab[i] / 50.0 - 1.0;
    plane = op(plane);
    Tensor out = lab;
    for (std::size_t i = 0; i < plane.size(); ++i) out[i] = (plane[i] + 1.0) * 50.0;
    return out;
}

} // namespace mcdnn
