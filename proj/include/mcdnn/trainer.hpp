#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mcdnn/augment.hpp"
#include "mcdnn/dataset.hpp"
#include "mcdnn/network.hpp"

namespace mcdnn {

struct TrainConfig {
    double eta_start = 0.001;
    double eta_factor = 0.993;
    double eta_min = 0.00003;
    int max_epochs = 800;
    std::uint64_t seed = 0;
    DistortionParams distortion;
    double validation_fraction = 0.1; // used when no explicit validation set

    void validate() const;
};

enum class StopReason { MaxEpochs, LearningRateFloor, ValidationZero, NotRun };

struct TrainState {
    int epochs_run = 0;
    double eta = 0.0; // rate used in the last epoch
    std::vector<double> train_loss;
    std::vector<double> validation_error;
    StopReason stop_reason = StopReason::NotRun;
};

/// max(eta_min, eta_start * eta_factor^e).
double lr_at_epoch(const TrainConfig& cfg, int epoch);

/// Smallest epoch index whose raw (unclamped) rate is <= eta_min; training
/// stops before running that epoch, so this equals the number of epochs a
/// full schedule executes.
int lr_crossing_epoch(const TrainConfig& cfg);

/// Every weight and bias ~ U[-0.05, 0.05), drawn in layer order and row-major
/// parameter order within each tensor (weights before bias).
void init_weights(Network& net, Rng& rng);

inline constexpr double kInitLo = -0.05;
inline constexpr double kInitHi = 0.05;

/// One full pass: re-distort every image with this epoch's streams, visit the
/// samples in a freshly shuffled order and apply w <- w - eta * grad after
/// each sample. Returns the mean training loss.
double train_epoch(Network& net, const Dataset& train, const TrainConfig& cfg, int epoch, double eta);

/// Classification error of the net on undistorted images.
double classification_error(Network& net, const Dataset& ds);

/// Deterministic holdout split: derived-stream shuffle, first fraction*n
/// images become the validation set.
std::pair<Dataset, Dataset> split_holdout(const Dataset& ds, double fraction, std::uint64_t seed);

/// Called after every epoch; val_error is -1 when no validation set exists.
using EpochObserver = std::function<void(int epoch, double eta, double loss, double val_error)>;

/// Full training loop: per-epoch distortion + online SGD, validation on
/// original images after every epoch; stops at zero validation error, at the
/// learning-rate floor, or after max_epochs.
TrainState fit(Network& net, const Dataset& train, const Dataset* validation, const TrainConfig& cfg,
               const EpochObserver& observer = {});

} // namespace mcdnn
