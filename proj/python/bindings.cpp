#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcdnn/evaluate.hpp"
#include "mcdnn/model_io.hpp"
#include "mcdnn/multicolumn.hpp"
#include "mcdnn/run_config.hpp"

namespace py = pybind11;
using namespace mcdnn;

namespace {

Tensor array_to_tensor(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    std::vector<int> shape;
    for (py::ssize_t d = 0; d < arr.ndim(); ++d) shape.push_back(static_cast<int>(arr.shape(d)));
    Tensor t(shape);
    std::copy_n(arr.data(), t.size(), t.data());
    return t;
}

py::array_t<double> tensor_to_array(const Tensor& t) {
    std::vector<py::ssize_t> shape;
    for (int e : t.shape()) shape.push_back(e);
    py::array_t<double> arr(shape);
    std::copy_n(t.data(), t.size(), arr.mutable_data());
    return arr;
}

std::vector<std::vector<double>> rows_of(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw ShapeError("predictions must be a 2-d array [n, classes]");
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(arr.shape(0)));
    const double* p = arr.data();
    const std::size_t c = static_cast<std::size_t>(arr.shape(1));
    for (auto& row : rows) {
        row.assign(p, p + c);
        p += c;
    }
    return rows;
}

DistortionParams params_from_kwargs(double max_translate, double max_rotate, double max_scale,
                                    double elastic_sigma, double elastic_alpha, int blur_radius,
                                    double blur_sigma, double fill, bool edge_clamp) {
    DistortionParams d;
    d.max_translate = max_translate;
    d.max_rotate = max_rotate;
    d.max_scale = max_scale;
    d.elastic_sigma = elastic_sigma;
    d.elastic_alpha = elastic_alpha;
    d.blur_radius = blur_radius;
    d.blur_sigma = blur_sigma;
    d.fill = fill;
    d.edge_clamp = edge_clamp;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "multi-column convolutional network core";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);

    // --- descriptors -----------------------------------------------------
    py::class_<NetDescriptor>(m, "NetDescriptor")
        .def_property_readonly("input_maps", &NetDescriptor::input_maps)
        .def_property_readonly("input_h", &NetDescriptor::input_h)
        .def_property_readonly("input_w", &NetDescriptor::input_w)
        .def_property_readonly("class_count", &NetDescriptor::class_count)
        .def_property_readonly("shapes",
                               [](const NetDescriptor& d) {
                                   py::list out;
                                   for (const LayerShape& s : d.shapes) {
                                       if (s.spatial)
                                           out.append(py::make_tuple(s.maps, s.h, s.w));
                                       else
                                           out.append(py::make_tuple(s.units));
                                   }
                                   return out;
                               })
        .def("__str__", [](const NetDescriptor& d) { return format_descriptor(d); });

    m.def("parse_descriptor", &parse_descriptor, py::arg("text"));
    m.def("format_descriptor", &format_descriptor, py::arg("descriptor"));
    m.def("inspect_descriptor",
          [](const std::string& text) { return inspect_descriptor(parse_descriptor(text)); });

    // --- network ----------------------------------------------------------
    py::class_<Network>(m, "Network")
        .def(py::init([](const std::string& descriptor) { return Network(parse_descriptor(descriptor)); }),
             py::arg("descriptor"))
        .def_property_readonly("descriptor",
                               [](const Network& n) { return format_descriptor(n.descriptor()); })
        .def_property_readonly("class_count", &Network::class_count)
        .def_property_readonly("parameter_count", &Network::parameter_count)
        .def("init_weights",
             [](Network& n, std::uint64_t seed) {
                 Rng rng(seed);
                 init_weights(n, rng);
             },
             py::arg("seed"))
        .def("predict",
             [](Network& n, const py::array_t<double, py::array::c_style | py::array::forcecast>& img) {
                 return n.predict(array_to_tensor(img));
             },
             py::arg("image"))
        .def("forward",
             [](Network& n, const py::array_t<double, py::array::c_style | py::array::forcecast>& img) {
                 return tensor_to_array(n.forward(array_to_tensor(img)));
             },
             py::arg("image"));

    m.def("save_model", [](const std::string& path, Network& net, const std::string& tag,
                           std::uint64_t seed) { save_model(path, net, tag, seed); },
          py::arg("path"), py::arg("net"), py::arg("preprocessor_tag") = "original", py::arg("seed") = 0);
    m.def("load_model", [](const std::string& path) {
        LoadedModel lm = load_model(path);
        return py::make_tuple(std::move(lm.net), lm.preprocessor_tag, lm.seed);
    });

    // --- datasets -----------------------------------------------------------
    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("size", &Dataset::size)
        .def_readonly("labels", &Dataset::labels)
        .def_readonly("class_count", &Dataset::class_count)
        .def_readonly("name", &Dataset::name)
        .def("image", [](const Dataset& ds, std::size_t i) { return tensor_to_array(ds.images.at(i)); });

    m.def("load_idx", &load_idx, py::arg("images_path"), py::arg("labels_path"));
    m.def("load_cifar10", &load_cifar10, py::arg("paths"));
    m.def("load_ppm_dir", &load_ppm_dir, py::arg("dir"));
    m.def("load_mcds", &load_mcds, py::arg("path"));
    m.def("save_mcds", &save_mcds, py::arg("dataset"), py::arg("path"));
    m.def("load_data_spec", &load_data_spec, py::arg("spec"));
    m.def("synthetic_shapes",
          [](std::uint64_t seed, int n, int class_count, int extent) {
              Rng rng(seed);
              return synthetic_shapes(rng, n, class_count, extent);
          },
          py::arg("seed"), py::arg("n"), py::arg("class_count"), py::arg("extent"));
    m.def("pad_canvas", &pad_canvas, py::arg("dataset"), py::arg("target_h"), py::arg("target_w"));

    // --- training -----------------------------------------------------------
    py::class_<TrainState>(m, "TrainState")
        .def_readonly("epochs_run", &TrainState::epochs_run)
        .def_readonly("train_loss", &TrainState::train_loss)
        .def_readonly("validation_error", &TrainState::validation_error);

    m.def("lr_at_epoch",
          [](double eta_start, double eta_factor, double eta_min, int epoch) {
              TrainConfig cfg;
              cfg.eta_start = eta_start;
              cfg.eta_factor = eta_factor;
              cfg.eta_min = eta_min;
              return lr_at_epoch(cfg, epoch);
          },
          py::arg("eta_start"), py::arg("eta_factor"), py::arg("eta_min"), py::arg("epoch"));
    m.def("lr_crossing_epoch",
          [](double eta_start, double eta_factor, double eta_min) {
              TrainConfig cfg;
              cfg.eta_start = eta_start;
              cfg.eta_factor = eta_factor;
              cfg.eta_min = eta_min;
              return lr_crossing_epoch(cfg);
          },
          py::arg("eta_start"), py::arg("eta_factor"), py::arg("eta_min"));

    m.def("fit",
          [](Network& net, const Dataset& train, int max_epochs, double eta_start, double eta_factor,
             double eta_min, std::uint64_t seed, double validation_fraction, double max_translate,
             double max_rotate, double max_scale, double elastic_sigma, double elastic_alpha,
             int blur_radius, double blur_sigma, double fill, bool edge_clamp) {
              TrainConfig cfg;
              cfg.max_epochs = max_epochs;
              cfg.eta_start = eta_start;
              cfg.eta_factor = eta_factor;
              cfg.eta_min = eta_min;
              cfg.seed = seed;
              cfg.validation_fraction = validation_fraction;
              cfg.distortion = params_from_kwargs(max_translate, max_rotate, max_scale, elastic_sigma,
                                                  elastic_alpha, blur_radius, blur_sigma, fill, edge_clamp);
              py::gil_scoped_release release;
              return fit(net, train, nullptr, cfg);
          },
          py::arg("net"), py::arg("train"), py::arg("max_epochs"), py::arg("eta_start") = 0.001,
          py::arg("eta_factor") = 0.993, py::arg("eta_min") = 0.00003, py::arg("seed") = 0,
          py::arg("validation_fraction") = 0.1, py::arg("max_translate") = 0.0, py::arg("max_rotate") = 0.0,
          py::arg("max_scale") = 0.0, py::arg("elastic_sigma") = 0.0, py::arg("elastic_alpha") = 0.0,
          py::arg("blur_radius") = 0, py::arg("blur_sigma") = 0.0, py::arg("fill") = -1.0,
          py::arg("edge_clamp") = false);

    m.def("classification_error",
          [](Network& net, const Dataset& ds) { return classification_error(net, ds); });

    // --- preprocessing and distortion ---------------------------------------
    m.def("apply_chain",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img,
             const std::string& chain, int canvas_h, int canvas_w) {
              return tensor_to_array(apply_chain(array_to_tensor(img), parse_chain(chain), canvas_h, canvas_w));
          },
          py::arg("image"), py::arg("chain"), py::arg("canvas_h") = 0, py::arg("canvas_w") = 0);
    m.def("rgb_to_lab",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img) {
              return tensor_to_array(rgb_to_lab(array_to_tensor(img)));
          });
    m.def("lab_to_rgb",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img) {
              return tensor_to_array(lab_to_rgb(array_to_tensor(img)));
          });
    m.def("distort",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img, std::uint64_t seed,
             double max_translate, double max_rotate, double max_scale, double elastic_sigma,
             double elastic_alpha, int blur_radius, double blur_sigma, double fill, bool edge_clamp) {
              Rng rng(seed);
              const DistortionParams d =
                  params_from_kwargs(max_translate, max_rotate, max_scale, elastic_sigma, elastic_alpha,
                                     blur_radius, blur_sigma, fill, edge_clamp);
              return tensor_to_array(distort_image(rng, array_to_tensor(img), d));
          },
          py::arg("image"), py::arg("seed"), py::arg("max_translate") = 0.0, py::arg("max_rotate") = 0.0,
          py::arg("max_scale") = 0.0, py::arg("elastic_sigma") = 0.0, py::arg("elastic_alpha") = 0.0,
          py::arg("blur_radius") = 0, py::arg("blur_sigma") = 0.0, py::arg("fill") = -1.0,
          py::arg("edge_clamp") = false);
    m.def("gaussian_blur",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img, int radius,
             double sigma) { return tensor_to_array(gaussian_blur(array_to_tensor(img), radius, sigma)); },
          py::arg("image"), py::arg("radius"), py::arg("sigma"));

    // --- evaluation -----------------------------------------------------------
    py::class_<EvaluationReport>(m, "EvaluationReport")
        .def_readonly("error_rate", &EvaluationReport::error_rate)
        .def_readonly("second_guess_error", &EvaluationReport::second_guess_error)
        .def_property_readonly("confusion",
                               [](const EvaluationReport& r) {
                                   py::array_t<long long> arr({r.confusion.classes, r.confusion.classes});
                                   std::copy(r.confusion.counts.begin(), r.confusion.counts.end(),
                                             arr.mutable_data());
                                   return arr;
                               })
        .def_property_readonly("rejection_curve", [](const EvaluationReport& r) {
            py::list out;
            for (const RejectionPoint& p : r.rejection_curve)
                out.append(py::make_tuple(p.threshold, p.reject_fraction, p.error_on_accepted));
            return out;
        });

    m.def("evaluate",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& preds,
             const std::vector<int>& labels) { return evaluate(rows_of(preds), labels); },
          py::arg("predictions"), py::arg("labels"));
    m.def("classify",
          [](const std::vector<double>& p) {
              const Classification c = classify(p);
              return py::make_tuple(c.label, c.confidence);
          });
    m.def("second_guess", &second_guess, py::arg("probabilities"));
    m.def("classify_with_reject", &classify_with_reject, py::arg("probabilities"), py::arg("threshold"));
}
