// mcdnn command line: train multi-column nets, evaluate models/ensembles,
// inspect descriptors, preprocess datasets and preview distortions.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mcdnn/evaluate.hpp"
#include "mcdnn/model_io.hpp"
#include "mcdnn/multicolumn.hpp"
#include "mcdnn/run_config.hpp"

namespace fs = std::filesystem;
using namespace mcdnn;

namespace {

std::string sanitize_tag(const std::string& tag) {
    std::string out;
    for (char c : tag)
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

struct ColumnJob {
    int index = 0;
    std::string chain_text;
    std::uint64_t seed = 0;
    fs::path model_path;
    std::string log;
};

int cmd_train(const std::string& config_path) {
    std::ifstream raw(config_path);
    if (!raw) throw ParseError("cannot open config '" + config_path + "'");
    std::ostringstream raw_text;
    raw_text << raw.rdbuf();
    std::cout << "config " << config_path << ":\n" << raw_text.str() << "\n";

    const RunConfig cfg = parse_run_config_text(raw_text.str(), config_path);
    const NetDescriptor desc = parse_descriptor(cfg.descriptor);
    const Dataset base = load_data_spec(cfg.train_data);
    if (base.images.empty()) throw DataError("training dataset is empty");
    if (base.class_count != desc.class_count())
        throw DataError("dataset has " + std::to_string(base.class_count) + " classes, descriptor output is " +
                        std::to_string(desc.class_count()));

    fs::create_directories(cfg.model_out);

    std::vector<ColumnJob> jobs;
    for (std::size_t p = 0; p < cfg.preprocessors.size(); ++p) {
        for (int r = 0; r < cfg.columns; ++r) {
            ColumnJob job;
            job.index = static_cast<int>(p) * cfg.columns + r;
            job.chain_text = cfg.preprocessors[p];
            job.seed = cfg.seed + static_cast<std::uint64_t>(job.index);
            std::ostringstream name;
            name << "column_" << job.index << "_" << sanitize_tag(job.chain_text) << ".mcd";
            job.model_path = fs::path(cfg.model_out) / name.str();
            jobs.push_back(std::move(job));
        }
    }

    std::atomic<std::size_t> next{0};
    std::mutex out_mutex;
    std::exception_ptr worker_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        try {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            ColumnJob& job = jobs[j];
            const PreChain chain = parse_chain(job.chain_text);
            const Dataset prepared = prepare_dataset(base, chain, desc.input_h(), desc.input_w());
            const auto& shape = prepared.images.front().shape();
            if (shape[0] != desc.input_maps() || shape[1] != desc.input_h() || shape[2] != desc.input_w())
                throw DataError("column " + std::to_string(job.index) + ": preprocessed images are " +
                                std::to_string(shape[0]) + "x" + std::to_string(shape[1]) + "x" +
                                std::to_string(shape[2]) + ", descriptor input is " +
                                std::to_string(desc.input_maps()) + "x" + std::to_string(desc.input_h()) +
                                "x" + std::to_string(desc.input_w()));

            Network net(desc);
            std::ostringstream log;
            const TrainConfig tc = cfg.train_config(job.seed);
            const TrainState state =
                fit(net, prepared, nullptr, tc, [&](int epoch, double eta, double loss, double verr) {
                    log << "column " << job.index << " epoch " << epoch << " eta " << eta << " loss "
                        << loss;
                    if (verr >= 0) log << " val_err " << verr;
                    log << "\n";
                });
            log << "column " << job.index << " done after " << state.epochs_run << " epochs\n";
            save_model(job.model_path.string(), net, job.chain_text, job.seed);
            job.log = log.str();
            {
                std::lock_guard<std::mutex> lock(out_mutex);
                std::cout << job.log << std::flush;
            }
        }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!worker_error) worker_error = std::current_exception();
        }
    };

    const int nthreads = std::min<int>(cfg.threads, static_cast<int>(jobs.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (worker_error) std::rethrow_exception(worker_error);

    std::vector<std::string> model_paths;
    for (const ColumnJob& job : jobs) model_paths.push_back(job.model_path.filename().string());
    const fs::path manifest = fs::path(cfg.model_out) / "ensemble.txt";
    write_manifest(manifest.string(), model_paths);
    std::cout << "wrote " << jobs.size() << " model files and manifest " << manifest.string() << "\n";
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& data_spec, const std::string& out_dir,
             int threads) {
    Ensemble ensemble = load_ensemble(model_path);
    const Dataset ds = load_data_spec(data_spec);
    if (ds.images.empty()) throw DataError("evaluation dataset is empty");
    if (ds.class_count != ensemble.class_count())
        throw DataError("dataset has " + std::to_string(ds.class_count) + " classes, ensemble outputs " +
                        std::to_string(ensemble.class_count()));
    for (std::size_t c = 0; c < ensemble.columns.size(); ++c) {
        const NetDescriptor& d = ensemble.columns[c].net.descriptor();
        const Tensor probe =
            prepare_image(ds.images.front(), ensemble.columns[c].preprocessor, d.input_h(), d.input_w());
        if (probe.extent(0) != d.input_maps() || probe.extent(1) != d.input_h() ||
            probe.extent(2) != d.input_w())
            throw DataError("column " + std::to_string(c) + ": preprocessed images are " +
                            std::to_string(probe.extent(0)) + "x" + std::to_string(probe.extent(1)) + "x" +
                            std::to_string(probe.extent(2)) + ", model input is " +
                            std::to_string(d.input_maps()) + "x" + std::to_string(d.input_h()) + "x" +
                            std::to_string(d.input_w()));
    }

    // per-column prediction tables, columns in parallel, fixed averaging order
    const std::size_t n = ds.images.size();
    std::vector<std::vector<std::vector<double>>> per_column(ensemble.columns.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr worker_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        try {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= ensemble.columns.size()) return;
                auto& out = per_column[c];
                out.resize(n);
                for (std::size_t i = 0; i < n; ++i)
                    out[i] = predict_column(ensemble.columns[c], ds.images[i]);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!worker_error) worker_error = std::current_exception();
        }
    };
    const int nthreads = std::min<int>(std::max(threads, 1), static_cast<int>(ensemble.columns.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (worker_error) std::rethrow_exception(worker_error);

    std::vector<std::vector<double>> averaged(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> mean = per_column[0][i];
        for (std::size_t c = 1; c < per_column.size(); ++c)
            for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += per_column[c][i][k];
        for (double& v : mean) v /= static_cast<double>(per_column.size());
        averaged[i] = std::move(mean);
    }

    const EvaluationReport rep = evaluate(averaged, ds.labels);

    fs::create_directories(out_dir);
    std::ostringstream err_text;
    err_text.precision(17);
    err_text << rep.error_rate << "\n";
    write_file(fs::path(out_dir) / "error", err_text.str());
    write_file(fs::path(out_dir) / "confusion.csv", confusion_csv(rep.confusion));
    write_file(fs::path(out_dir) / "rejection.csv", rejection_csv(rep.rejection_curve));
    write_file(fs::path(out_dir) / "errors.csv", errors_csv(rep.misclassified));

    std::ostringstream report;
    report.precision(6);
    report << "samples:             " << n << "\n"
           << "columns:             " << ensemble.columns.size() << "\n"
           << "error rate:          " << rep.error_rate * 100 << "%\n"
           << "first+second wrong:  " << rep.second_guess_error * 100 << "%\n\n"
           << render_confusion(rep.confusion);
    write_file(fs::path(out_dir) / "report.txt", report.str());
    std::cout << report.str();
    std::cout << "reports written to " << out_dir << "\n";
    return 0;
}

int cmd_inspect(const std::string& descriptor) {
    std::cout << inspect_descriptor(parse_descriptor(descriptor));
    return 0;
}

int cmd_preprocess(const std::string& data_spec, const std::string& chain_text, const std::string& out_path,
                   int canvas_h, int canvas_w) {
    const Dataset ds = load_data_spec(data_spec);
    const PreChain chain = parse_chain(chain_text);
    Dataset out;
    out.labels = ds.labels;
    out.class_count = ds.class_count;
    out.name = ds.name + ":" + format_chain(chain);
    for (const Tensor& img : ds.images) out.images.push_back(apply_chain(img, chain, canvas_h, canvas_w));
    save_mcds(out, out_path);
    std::cout << "wrote " << out.images.size() << " images to " << out_path << "\n";
    return 0;
}

int cmd_augment_preview(const std::string& data_spec, const std::string& out_dir, int count,
                        const DistortionParams& params, std::uint64_t seed) {
    const Dataset ds = load_data_spec(data_spec);
    if (ds.images.empty()) throw DataError("dataset is empty");
    fs::create_directories(out_dir);
    // 1-map images become graymaps, 3-map images pixmaps; anything else
    // (stereo pairs) is written as one graymap per map
    auto write_image = [&](const Tensor& img, const std::string& stem) {
        const int maps = img.extent(0);
        if (maps == 1 || maps == 3) {
            write_pnm(img, (fs::path(out_dir) / (stem + (maps == 3 ? ".ppm" : ".pgm"))).string());
            return;
        }
        const int h = img.extent(1), w = img.extent(2);
        for (int m = 0; m < maps; ++m) {
            Tensor plane({1, h, w});
            std::copy_n(img.data() + static_cast<std::size_t>(m) * h * w, plane.size(), plane.data());
            write_pnm(plane, (fs::path(out_dir) / (stem + "_m" + std::to_string(m) + ".pgm")).string());
        }
    };
    const int n = std::min<int>(count, static_cast<int>(ds.images.size()));
    for (int i = 0; i < n; ++i) {
        const Tensor& img = ds.images[static_cast<std::size_t>(i)];
        write_image(img, "orig_" + std::to_string(i));
        Rng rng(Rng::hash_words({seed, static_cast<std::uint64_t>(i)}));
        write_image(distort_image(rng, img, params), "dist_" + std::to_string(i));
    }
    std::cout << "wrote " << n << " original/distorted pairs to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-column convolutional network trainer and evaluator"};
    app.require_subcommand(1);

    std::string config_path;
    auto* train = app.add_subcommand("train", "train the configured columns and write model files");
    train->add_option("config", config_path, "key=value run configuration file")->required();

    std::string model_path, data_spec, out_dir = "eval_out";
    int eval_threads = 1;
    auto* eval = app.add_subcommand("eval", "evaluate a model file or ensemble manifest");
    eval->add_option("model", model_path, "model file or manifest")->required();
    eval->add_option("data", data_spec, "dataset spec (idx:, cifar:, mcds:, ppm:, synthetic:)")->required();
    eval->add_option("-o,--out", out_dir, "report output directory");
    eval->add_option("--threads", eval_threads, "parallel column evaluation");

    std::string descriptor;
    auto* inspect = app.add_subcommand("inspect", "print the layer table of a descriptor");
    inspect->add_option("descriptor", descriptor, "architecture string")->required();

    std::string chain_text, pre_out;
    int canvas_h = 0, canvas_w = 0;
    auto* preprocess = app.add_subcommand("preprocess", "apply a preprocessor chain, write an MCDS dataset");
    preprocess->add_option("data", data_spec, "dataset spec")->required();
    preprocess->add_option("chain", chain_text, "preprocessor chain, steps joined by '+'")->required();
    preprocess->add_option("out", pre_out, "output .mcds path")->required();
    preprocess->add_option("--canvas-h", canvas_h, "target canvas height for width normalization");
    preprocess->add_option("--canvas-w", canvas_w, "target canvas width for width normalization");

    int preview_count = 8;
    std::uint64_t preview_seed = 0;
    DistortionParams params;
    std::string fill_mode = "background";
    auto* preview = app.add_subcommand("augment-preview", "write original and distorted sample images");
    preview->add_option("data", data_spec, "dataset spec")->required();
    preview->add_option("out", out_dir, "output directory")->required();
    preview->add_option("-n,--count", preview_count, "number of samples");
    preview->add_option("--seed", preview_seed, "distortion seed");
    preview->add_option("--max-translate", params.max_translate, "translation bound, fraction of extent");
    preview->add_option("--max-rotate", params.max_rotate, "rotation bound, degrees");
    preview->add_option("--max-scale", params.max_scale, "scaling bound, fraction");
    preview->add_option("--elastic-sigma", params.elastic_sigma, "elastic field smoothing, pixels");
    preview->add_option("--elastic-alpha", params.elastic_alpha, "elastic displacement scale, pixels");
    preview->add_option("--blur-radius", params.blur_radius, "blur window radius");
    preview->add_option("--blur-sigma", params.blur_sigma, "blur standard deviation");
    preview->add_option("--fill-mode", fill_mode, "background|edge");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*train) return cmd_train(config_path);
        if (*eval) return cmd_eval(model_path, data_spec, out_dir, eval_threads);
        if (*inspect) return cmd_inspect(descriptor);
        if (*preprocess) return cmd_preprocess(data_spec, chain_text, pre_out, canvas_h, canvas_w);
        if (*preview) {
            if (fill_mode == "edge")
                params.edge_clamp = true;
            else if (fill_mode != "background")
                throw ParseError("--fill-mode must be 'background' or 'edge'");
            return cmd_augment_preview(data_spec, out_dir, preview_count, params, preview_seed);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
