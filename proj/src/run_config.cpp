#include "mcdnn/run_config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "mcdnn/preprocess.hpp"

namespace mcdnn {

namespace {

std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_num(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ParseError("config line " + std::to_string(line) + ": bad number '" + v + "' for key '" +
                         key + "'");
    }
}

long long parse_int(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ParseError("config line " + std::to_string(line) + ": bad integer '" + v + "' for key '" +
                         key + "'");
    }
}

} // namespace

TrainConfig RunConfig::train_config(std::uint64_t column_seed) const {
    TrainConfig cfg;
    cfg.eta_start = eta_start;
    cfg.eta_factor = eta_factor;
    cfg.eta_min = eta_min;
    cfg.max_epochs = max_epochs;
    cfg.seed = column_seed;
    cfg.distortion = distortion;
    cfg.validation_fraction = validation_fraction;
    cfg.validate();
    return cfg;
}

RunConfig parse_run_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_preprocessors = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + " line " + std::to_string(lineno) + ": expected key=value, got '" +
                             line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "descriptor") {
            cfg.descriptor = value;
        } else if (key == "train_data") {
            cfg.train_data = value;
        } else if (key == "preprocessors") {
            cfg.preprocessors.clear();
            for (const std::string& p : split_on(value, ',')) {
                const std::string t = trim(p);
                if (!t.empty()) cfg.preprocessors.push_back(t);
            }
            have_preprocessors = true;
        } else if (key == "columns") {
            cfg.columns = static_cast<int>(parse_int(value, key, lineno));
        } else if (key == "eta_start") {
            cfg.eta_start = parse_num(value, key, lineno);
        } else if (key == "eta_factor") {
            cfg.eta_factor = parse_num(value, key, lineno);
        } else if (key == "eta_min") {
            cfg.eta_min = parse_num(value, key, lineno);
        } else if (key == "max_epochs") {
            cfg.max_epochs = static_cast<int>(parse_int(value, key, lineno));
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(value, key, lineno));
        } else if (key == "max_translate") {
            cfg.distortion.max_translate = parse_num(value, key, lineno);
        } else if (key == "max_rotate") {
            cfg.distortion.max_rotate = parse_num(value, key, lineno);
        } else if (key == "max_scale") {
            cfg.distortion.max_scale = parse_num(value, key, lineno);
        } else if (key == "elastic_sigma") {
            cfg.distortion.elastic_sigma = parse_num(value, key, lineno);
        } else if (key == "elastic_alpha") {
            cfg.distortion.elastic_alpha = parse_num(value, key, lineno);
        } else if (key == "blur_radius") {
            cfg.distortion.blur_radius = static_cast<int>(parse_int(value, key, lineno));
        } else if (key == "blur_sigma") {
            cfg.distortion.blur_sigma = parse_num(value, key, lineno);
        } else if (key == "fill_mode") {
            if (value == "background")
                cfg.distortion.edge_clamp = false;
            else if (value == "edge")
                cfg.distortion.edge_clamp = true;
            else
                throw ParseError(origin + " line " + std::to_string(lineno) +
                                 ": fill_mode must be 'background' or 'edge', got '" + value + "'");
        } else if (key == "validation_fraction") {
            cfg.validation_fraction = parse_num(value, key, lineno);
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(parse_int(value, key, lineno));
        } else if (key == "model_out") {
            cfg.model_out = value;
        } else {
            throw ParseError(origin + " line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (cfg.descriptor.empty()) throw ParseError(origin + ": missing key 'descriptor'");
    if (cfg.train_data.empty()) throw ParseError(origin + ": missing key 'train_data'");
    if (cfg.columns < 1) throw ParseError(origin + ": 'columns' must be >= 1");
    if (cfg.threads < 1) throw ParseError(origin + ": 'threads' must be >= 1");
    if (!have_preprocessors || cfg.preprocessors.empty()) cfg.preprocessors = {"original"};
    for (const std::string& p : cfg.preprocessors) parse_chain(p); // validate early
    return cfg;
}

RunConfig parse_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config_text(buf.str(), path);
}

std::string format_run_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "descriptor=" << cfg.descriptor << "\n";
    out << "train_data=" << cfg.train_data << "\n";
    out << "preprocessors=";
    for (std::size_t i = 0; i < cfg.preprocessors.size(); ++i)
        out << (i ? "," : "") << cfg.preprocessors[i];
    out << "\n";
    out << "columns=" << cfg.columns << "\n";
    out << "eta_start=" << cfg.eta_start << "\n";
    out << "eta_factor=" << cfg.eta_factor << "\n";
    out << "eta_min=" << cfg.eta_min << "\n";
    out << "max_epochs=" << cfg.max_epochs << "\n";
    out << "seed=" << cfg.seed << "\n";
    out << "max_translate=" << cfg.distortion.max_translate << "\n";
    out << "max_rotate=" << cfg.distortion.max_rotate << "\n";
    out << "max_scale=" << cfg.distortion.max_scale << "\n";
    out << "elastic_sigma=" << cfg.distortion.elastic_sigma << "\n";
    out << "elastic_alpha=" << cfg.distortion.elastic_alpha << "\n";
    out << "blur_radius=" << cfg.distortion.blur_radius << "\n";
    out << "blur_sigma=" << cfg.distortion.blur_sigma << "\n";
    out << "fill_mode=" << (cfg.distortion.edge_clamp ? "edge" : "background") << "\n";
    out << "validation_fraction=" << cfg.validation_fraction << "\n";
    out << "threads=" << cfg.threads << "\n";
    out << "model_out=" << cfg.model_out << "\n";
    return out.str();
}

Dataset load_data_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ParseError("data spec '" + spec + "' needs a format prefix (idx:, cifar:, mcds:, ppm:, synthetic:)");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    const auto parts = split_on(rest, ',');

    if (kind == "idx") {
        if (parts.size() != 2)
            throw ParseError("data spec 'idx:' needs <images>,<labels>, got '" + spec + "'");
        return load_idx(parts[0], parts[1]);
    }
    if (kind == "cifar") {
        if (rest.empty()) throw ParseError("data spec 'cifar:' needs at least one batch file");
        return load_cifar10(parts);
    }
    if (kind == "mcds") {
        if (parts.size() != 1) throw ParseError("data spec 'mcds:' takes one path, got '" + spec + "'");
        return load_mcds(rest);
    }
    if (kind == "ppm") {
        if (parts.size() != 1) throw ParseError("data spec 'ppm:' takes one directory, got '" + spec + "'");
        return load_ppm_dir(rest);
    }
    if (kind == "synthetic") {
        if (parts.size() < 3 || parts.size() > 4)
            throw ParseError("data spec 'synthetic:' needs <n>,<classes>,<extent>[,<seed>], got '" + spec + "'");
        const int n = static_cast<int>(parse_int(parts[0], "synthetic n", 0));
        const int classes = static_cast<int>(parse_int(parts[1], "synthetic classes", 0));
        const int extent = static_cast<int>(parse_int(parts[2], "synthetic extent", 0));
        const std::uint64_t seed =
            parts.size() == 4 ? static_cast<std::uint64_t>(parse_int(parts[3], "synthetic seed", 0)) : 0;
        Rng rng(seed);
        return synthetic_shapes(rng, n, classes, extent);
    }
    throw ParseError("unknown data spec format '" + kind + "' in '" + spec + "'");
}

} // namespace mcdnn
