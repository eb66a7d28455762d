#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// Slower integration run: the published digit architecture at full size,
// trained end to end on synthetic shapes with the whole pipeline engaged
// (distortion, preprocessing, holdout validation, ensembles, model files).

#include <cstdio>
#include <filesystem>
#include <unistd.h>

#include "mcdnn/evaluate.hpp"
#include "mcdnn/model_io.hpp"
#include "mcdnn/multicolumn.hpp"
#include "mcdnn/trainer.hpp"

using namespace mcdnn;
namespace fs = std::filesystem;

TEST_CASE("full-size digit net learns synthetic shapes through the whole pipeline") {
    Rng data_rng(2001);
    Dataset train = synthetic_shapes(data_rng, 600, 6, 29);
    Dataset test = synthetic_shapes(data_rng, 240, 6, 29);

    // the 29x29 digit architecture with a 6-class head
    const NetDescriptor desc = parse_descriptor("1x29x29-20C4-MP2-40C5-MP3-150N-6N");
    Network net(desc);

    TrainConfig cfg;
    cfg.eta_start = 0.001;
    cfg.eta_factor = 0.993;
    cfg.eta_min = 0.00003;
    cfg.max_epochs = 3;
    cfg.seed = 77;
    cfg.validation_fraction = 0.1;
    cfg.distortion.max_translate = 0.075;
    cfg.distortion.max_rotate = 7.5;
    cfg.distortion.max_scale = 0.075;

    const TrainState state = fit(net, train, nullptr, cfg);
    REQUIRE(state.epochs_run == 3);
    CHECK(state.train_loss.back() < state.train_loss.front());

    const double err = classification_error(net, test);
    CHECK(err < 0.5); // chance level is 5/6

    // column + model file round trip keeps predictions bit-identical
    const fs::path dir = fs::temp_directory_path() / ("mcdnn_fullpipe_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string model_path = (dir / "col.mcd").string();
    save_model(model_path, net, "original", cfg.seed);
    Ensemble e = load_ensemble(model_path);
    std::vector<std::vector<double>> preds;
    for (const Tensor& img : test.images) preds.push_back(predict_ensemble(e, img));
    const EvaluationReport rep = evaluate(preds, test.labels);
    CHECK(rep.error_rate == doctest::Approx(err).epsilon(1e-12));
    CHECK(rep.confusion.total() == 240);
    fs::remove_all(dir);
}
