#include "mcdnn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mcdnn {

namespace {

// stream tags for the independent rng streams of one training run
constexpr std::uint64_t kStreamInit = 0x1;
constexpr std::uint64_t kStreamShuffle = 0x2;
constexpr std::uint64_t kStreamHoldout = 0x3;
constexpr std::uint64_t kStreamDistort = 0x4;

} // namespace

void TrainConfig::validate() const {
    if (!(eta_start > 0)) throw ShapeError("train config: eta_start must be positive");
    if (!(eta_min > 0 && eta_min < eta_start))
        throw ShapeError("train config: need 0 < eta_min < eta_start");
    if (!(eta_factor > 0 && eta_factor < 1))
        throw ShapeError("train config: eta_factor must be in (0,1)");
    if (max_epochs < 0) throw ShapeError("train config: max_epochs must be >= 0");
    if (validation_fraction < 0 || validation_fraction >= 1)
        throw ShapeError("train config: validation_fraction must be in [0,1)");
    if (distortion.max_translate < 0 || distortion.max_rotate < 0 || distortion.max_scale < 0 ||
        distortion.elastic_sigma < 0 || distortion.elastic_alpha < 0 || distortion.blur_radius < 0 ||
        distortion.blur_sigma < 0)
        throw ShapeError("train config: distortion bounds must be >= 0");
    if (distortion.elastic_alpha > 0 && !(distortion.elastic_sigma > 0))
        throw ShapeError("train config: elastic distortion needs a positive sigma");
}

double lr_at_epoch(const TrainConfig& cfg, int epoch) {
    return std::max(cfg.eta_min, cfg.eta_start * std::pow(cfg.eta_factor, epoch));
}

int lr_crossing_epoch(const TrainConfig& cfg) {
    int e = 0;
    while (cfg.eta_start * std::pow(cfg.eta_factor, e) > cfg.eta_min) ++e;
    return e;
}

void init_weights(Network& net, Rng& rng) {
    for (Tensor* t : net.parameters()) fill_uniform(*t, rng, kInitLo, kInitHi);
}

double classification_error(Network& net, const Dataset& ds) {
    if (ds.images.empty()) throw ShapeError("classification_error: empty dataset");
    long long wrong = 0;
    for (std::size_t i = 0; i < ds.images.size(); ++i) {
        const auto p = net.predict(ds.images[i]);
        int best = 0;
        for (std::size_t c = 1; c < p.size(); ++c)
            if (p[c] > p[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
        if (best != ds.labels[i]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(ds.images.size());
}

std::pair<Dataset, Dataset> split_holdout(const Dataset& ds, double fraction, std::uint64_t seed) {
    if (fraction <= 0 || fraction >= 1) throw ShapeError("split_holdout: fraction must be in (0,1)");
    const std::size_t n = ds.images.size();
    std::size_t k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    k = std::max<std::size_t>(1, std::min(k, n - 1));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng = Rng::derive(seed, kStreamHoldout);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    Dataset val, train;
    val.class_count = train.class_count = ds.class_count;
    val.name = ds.name + ":holdout";
    train.name = ds.name;
    for (std::size_t i = 0; i < n; ++i) {
        Dataset& dst = i < k ? val : train;
        dst.images.push_back(ds.images[order[i]]);
        dst.labels.push_back(ds.labels[order[i]]);
    }
    return {std::move(train), std::move(val)};
}

double train_epoch(Network& net, const Dataset& train, const TrainConfig& cfg, int epoch, double eta) {
    const std::size_t n = train.images.size();
    if (n == 0) throw ShapeError("train_epoch: empty training set");

    // D block: fresh distortion of every image, one deterministic stream per
    // (seed, epoch, image) so the result is independent of evaluation order
    std::vector<Tensor> distorted;
    const bool distort = cfg.distortion.any();
    if (distort) {
        distorted.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            Rng img_rng(Rng::hash_words({cfg.seed, kStreamDistort, static_cast<std::uint64_t>(epoch), i}));
            distorted.push_back(distort_image(img_rng, train.images[i], cfg.distortion));
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(Rng::hash_words({cfg.seed, kStreamShuffle, static_cast<std::uint64_t>(epoch)}));
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[shuffle_rng.below(i)]);

    double loss_sum = 0.0;
    for (std::size_t idx : order) {
        const Tensor& img = distort ? distorted[idx] : train.images[idx];
        loss_sum += net.loss_and_gradients(img, train.labels[idx]);
        net.sgd_step(eta);
    }
    return loss_sum / static_cast<double>(n);
}

TrainState fit(Network& net, const Dataset& train, const Dataset* validation, const TrainConfig& cfg,
               const EpochObserver& observer) {
    cfg.validate();
    if (train.images.empty()) throw ShapeError("fit: empty training set");

    Dataset local_train, local_val;
    const Dataset* train_ptr = &train;
    const Dataset* val_ptr = validation;
    if (!val_ptr && cfg.validation_fraction > 0 && train.images.size() > 1) {
        std::tie(local_train, local_val) = split_holdout(train, cfg.validation_fraction, cfg.seed);
        train_ptr = &local_train;
        val_ptr = &local_val;
    }

    Rng init_rng = Rng::derive(cfg.seed, kStreamInit);
    init_weights(net, init_rng);

    TrainState state;
    for (int e = 0;; ++e) {
        if (e >= cfg.max_epochs) {
            state.stop_reason = StopReason::MaxEpochs;
            break;
        }
        // stop once the raw annealed rate reaches the predetermined minimum
        if (cfg.eta_start * std::pow(cfg.eta_factor, e) <= cfg.eta_min) {
            state.stop_reason = StopReason::LearningRateFloor;
            break;
        }
        const double eta = lr_at_epoch(cfg, e);
        state.eta = eta;
        state.train_loss.push_back(train_epoch(net, *train_ptr, cfg, e, eta));
        state.epochs_run = e + 1;

        double verr = -1.0;
        if (val_ptr) {
            verr = classification_error(net, *val_ptr);
            state.validation_error.push_back(verr);
        }
        if (observer) observer(e, eta, state.train_loss.back(), verr);
        if (verr == 0.0) {
            state.stop_reason = StopReason::ValidationZero;
            break;
        }
    }
    return state;
}

} // namespace mcdnn
