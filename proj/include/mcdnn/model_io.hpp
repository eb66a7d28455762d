#pragma once

#include <string>
#include <vector>

#include "mcdnn/multicolumn.hpp"
#include "mcdnn/network.hpp"

namespace mcdnn {

/// Binary model container:
///   "MCD1" | version u32le (=1) | descriptor string (u32le length + bytes) |
///   preprocessor tag string (same encoding) | seed u64le | one block per
///   non-input layer: kind byte (1 conv, 2 pool, 3 fully), parameter count
///   u64le, parameters f64le. Conv parameters run [out][in][row][col] then
///   biases [out]; fully [out][in] then biases [out]. Pool blocks carry no
///   parameters. Trailing bytes are an error.
void save_model(const std::string& path, Network& net, const std::string& preprocessor_tag,
                std::uint64_t seed);

struct LoadedModel {
    Network net;
    std::string preprocessor_tag;
    std::uint64_t seed = 0;
};

LoadedModel load_model(const std::string& path);

/// Ensemble manifest: plain text, one model file path per line (relative
/// paths resolve against the manifest's directory).
std::vector<std::string> read_manifest(const std::string& path);
void write_manifest(const std::string& path, const std::vector<std::string>& model_paths);

/// Load either a single model file or a manifest of them as an ensemble.
Ensemble load_ensemble(const std::string& path);

} // namespace mcdnn
