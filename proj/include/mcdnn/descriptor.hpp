#pragma once

#include <string>
#include <vector>

#include "mcdnn/error.hpp"

namespace mcdnn {

enum class LayerKind { Input, Conv, MaxPool, Fully };

struct LayerSpec {
    LayerKind kind;
    int maps = 0;   // Input: channel count; Conv: output maps
    int height = 0; // Input only
    int width = 0;  // Input only
    int kernel = 0; // Conv only
    int pool = 0;   // MaxPool only
    int units = 0;  // Fully only

    bool operator==(const LayerSpec&) const = default;
};

/// Output geometry of one layer: spatial (maps, h, w) or flat (units).
struct LayerShape {
    bool spatial = true;
    int maps = 0;
    int h = 0;
    int w = 0;
    int units = 0;

    bool operator==(const LayerShape&) const = default;
};

/// A parsed architecture string such as "1x29x29-20C4-MP2-40C5-MP3-150N-10N":
/// input channels/extent, then convolutional (<maps>C<kernel>), max-pooling
/// (MP<size>, optionally map-prefixed), and fully connected (<units>N) layers.
/// shapes[i] is the output geometry of layers[i]; shapes[0] is the input.
struct NetDescriptor {
    std::vector<LayerSpec> layers;
    std::vector<LayerShape> shapes;

    int input_maps() const { return layers.front().maps; }
    int input_h() const { return layers.front().height; }
    int input_w() const { return layers.front().width; }
    int class_count() const { return layers.back().units; }
};

/// Parse and validate; every failure names the offending token. Convolutions
/// are valid (out = in - kernel + 1 must stay >= 1), pooling regions must
/// divide the spatial extents exactly, the first token must be an input spec
/// and the last a fully connected layer.
NetDescriptor parse_descriptor(const std::string& text);

/// Canonical string (map prefixes on MP tokens are dropped);
/// parse_descriptor(format_descriptor(d)) is structurally equal to d.
std::string format_descriptor(const NetDescriptor& d);

/// Per-layer table: type, maps/neurons, kernel, parameter count.
std::string inspect_descriptor(const NetDescriptor& d);

/// Trainable parameter count (weights + biases) of one layer.
long long layer_param_count(const NetDescriptor& d, std::size_t layer_index);

} // namespace mcdnn
