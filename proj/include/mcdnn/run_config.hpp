#pragma once

#include <string>
#include <vector>

#include "mcdnn/dataset.hpp"
#include "mcdnn/trainer.hpp"

namespace mcdnn {

/// Plain-text key=value run description for the train command. Unknown keys
/// are rejected with their line number. '#' starts a comment.
///
/// Keys: descriptor, train_data, preprocessors (comma-separated chains),
/// columns, eta_start, eta_factor, eta_min, max_epochs, seed, max_translate,
/// max_rotate, max_scale, elastic_sigma, elastic_alpha, blur_radius,
/// blur_sigma, fill_mode (background|edge), validation_fraction, threads,
/// model_out.
struct RunConfig {
    std::string descriptor;
    std::string train_data;
    std::vector<std::string> preprocessors = {"original"};
    int columns = 1;
    double eta_start = 0.001;
    double eta_factor = 0.993;
    double eta_min = 0.00003;
    int max_epochs = 800;
    std::uint64_t seed = 0;
    DistortionParams distortion;
    double validation_fraction = 0.1;
    int threads = 1;
    std::string model_out = "models";

    TrainConfig train_config(std::uint64_t column_seed) const;
};

RunConfig parse_run_config(const std::string& path);
RunConfig parse_run_config_text(const std::string& text, const std::string& origin);

/// The config echoed back in canonical key=value form.
std::string format_run_config(const RunConfig& cfg);

/// Load a dataset from a prefixed spec:
///   idx:<images>,<labels> | cifar:<batch>[,<batch>...] | mcds:<path> |
///   ppm:<dir> | synthetic:<n>,<classes>,<extent>[,<seed>]
Dataset load_data_spec(const std::string& spec);

} // namespace mcdnn
