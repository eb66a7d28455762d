#pragma once

#include <string>
#include <vector>

#include "mcdnn/rng.hpp"
#include "mcdnn/tensor.hpp"

namespace mcdnn {

/// Labeled images, every pixel already normalized to [-1, 1].
struct Dataset {
    std::vector<Tensor> images; // each [maps,h,w]
    std::vector<int> labels;
    int class_count = 0;
    std::string name;

    std::size_t size() const { return images.size(); }
    void validate() const; // label range and image/label count agreement
};

/// MNIST-style IDX pair: big-endian magics 2051 (images) / 2049 (labels),
/// unsigned bytes mapped to 2*(v/255) - 1.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

/// CIFAR-10 binary batches: records of 1 label byte + 3072 channel bytes.
Dataset load_cifar10(const std::vector<std::string>& paths);

/// Directory with one subdirectory per class (sorted name order), each
/// holding binary P5/P6 images.
Dataset load_ppm_dir(const std::string& dir);

/// Balanced parametric shape classes (rectangle, disk, cross, stripes, ring,
/// triangle) with position jitter; deterministic under the seed and separable
/// enough for a small net to reach zero training error.
Dataset synthetic_shapes(Rng& rng, int n, int class_count, int extent);

/// Center images on a background canvas; offsets are floor((target-src)/2).
Dataset pad_canvas(const Dataset& ds, int target_h, int target_w);
Tensor pad_canvas_image(const Tensor& image, int target_h, int target_w);

/// Derived-dataset container, all integers little-endian:
/// "MCDS1" | class_count u32 | count u32 | maps u32 | h u32 | w u32 |
/// count*maps*h*w f64 pixels | count i32 labels.
void save_mcds(const Dataset& ds, const std::string& path);
Dataset load_mcds(const std::string& path);

/// Binary portable maps, maxval 255: P5 for one map, P6 for three.
void write_pnm(const Tensor& image, const std::string& path);
Tensor read_pnm(const std::string& path);

} // namespace mcdnn
