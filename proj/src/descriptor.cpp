#include "mcdnn/descriptor.hpp"

#include <cctype>
#include <sstream>

namespace mcdnn {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

int parse_positive(const std::string& s, const std::string& token, const char* what) {
    if (!all_digits(s))
        throw ParseError(std::string("bad ") + what + " in token '" + token + "'");
    long v = 0;
    for (char c : s) {
        v = v * 10 + (c - '0');
        if (v > 1000000) throw ParseError(std::string(what) + " out of range in token '" + token + "'");
    }
    if (v < 1) throw ParseError(std::string(what) + " must be >= 1 in token '" + token + "'");
    return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
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

LayerSpec parse_token(const std::string& tok, bool first) {
    LayerSpec spec;
    const auto xs = split(tok, 'x');
    if (xs.size() == 3) {
        spec.kind = LayerKind::Input;
        spec.maps = parse_positive(xs[0], tok, "input map count");
        spec.height = parse_positive(xs[1], tok, "input height");
        spec.width = parse_positive(xs[2], tok, "input width");
        if (!first) throw ParseError("input token '" + tok + "' only allowed first");
        return spec;
    }
    if (first) throw ParseError("first token must be an input spec MxHxW, got '" + tok + "'");

    const auto mp = tok.find("MP");
    if (mp != std::string::npos) {
        spec.kind = LayerKind::MaxPool;
        spec.pool = parse_positive(tok.substr(mp + 2), tok, "pool size");
        if (spec.pool < 2) throw ParseError("pool size must be >= 2 in token '" + tok + "'");
        if (mp > 0) spec.maps = parse_positive(tok.substr(0, mp), tok, "map prefix"); // checked later
        return spec;
    }
    const auto c = tok.find('C');
    if (c != std::string::npos) {
        spec.kind = LayerKind::Conv;
        spec.maps = parse_positive(tok.substr(0, c), tok, "map count");
        spec.kernel = parse_positive(tok.substr(c + 1), tok, "kernel size");
        return spec;
    }
    if (!tok.empty() && tok.back() == 'N') {
        spec.kind = LayerKind::Fully;
        spec.units = parse_positive(tok.substr(0, tok.size() - 1), tok, "unit count");
        return spec;
    }
    throw ParseError("unknown token '" + tok + "'");
}

} // namespace

NetDescriptor parse_descriptor(const std::string& text) {
    if (text.empty()) throw ParseError("empty descriptor");
    const auto tokens = split(text, '-');

    NetDescriptor d;
    LayerShape cur;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        LayerSpec spec = parse_token(tok, i == 0);
        switch (spec.kind) {
        case LayerKind::Input:
            cur = LayerShape{true, spec.maps, spec.height, spec.width, 0};
            break;
        case LayerKind::Conv: {
            if (!cur.spatial)
                throw ParseError("convolution token '" + tok + "' after fully connected layer");
            const int oh = cur.h - spec.kernel + 1;
            const int ow = cur.w - spec.kernel + 1;
            if (oh < 1 || ow < 1)
                throw ParseError("conv kernel " + std::to_string(spec.kernel) + " larger than input " +
                                 std::to_string(cur.h) + "x" + std::to_string(cur.w) + " at token '" + tok + "'");
            cur = LayerShape{true, spec.maps, oh, ow, 0};
            break;
        }
        case LayerKind::MaxPool: {
            if (!cur.spatial)
                throw ParseError("pooling token '" + tok + "' after fully connected layer");
            if (spec.maps != 0 && spec.maps != cur.maps)
                throw ParseError("map prefix " + std::to_string(spec.maps) + " does not match current " +
                                 std::to_string(cur.maps) + " maps at token '" + tok + "'");
            spec.maps = cur.maps;
            if (cur.h % spec.pool != 0 || cur.w % spec.pool != 0)
                throw ParseError("pool size " + std::to_string(spec.pool) + " does not divide " +
                                 std::to_string(cur.h) + "x" + std::to_string(cur.w) + " at token '" + tok + "'");
            cur = LayerShape{true, cur.maps, cur.h / spec.pool, cur.w / spec.pool, 0};
            break;
        }
        case LayerKind::Fully: {
            cur = LayerShape{false, 0, 0, 0, spec.units};
            break;
        }
        }
        d.layers.push_back(spec);
        d.shapes.push_back(cur);
    }

    if (d.layers.size() < 2) throw ParseError("descriptor needs at least an input and an output layer");
    if (d.layers.back().kind != LayerKind::Fully)
        throw ParseError("last token must be a fully connected layer, got '" + tokens.back() + "'");
    return d;
}

std::string format_descriptor(const NetDescriptor& d) {
    std::ostringstream out;
    for (std::size_t i = 0; i < d.layers.size(); ++i) {
        const LayerSpec& s = d.layers[i];
        if (i > 0) out << '-';
        switch (s.kind) {
        case LayerKind::Input: out << s.maps << 'x' << s.height << 'x' << s.width; break;
        case LayerKind::Conv: out << s.maps << 'C' << s.kernel; break;
        case LayerKind::MaxPool: out << "MP" << s.pool; break;
        case LayerKind::Fully: out << s.units << 'N'; break;
        }
    }
    return out.str();
}

long long layer_param_count(const NetDescriptor& d, std::size_t i) {
    const LayerSpec& s = d.layers[i];
    switch (s.kind) {
    case LayerKind::Conv: {
        const int in_maps = d.shapes[i - 1].maps;
        return static_cast<long long>(s.maps) * in_maps * s.kernel * s.kernel + s.maps;
    }
    case LayerKind::Fully: {
        const LayerShape& prev = d.shapes[i - 1];
        const long long in = prev.spatial ? static_cast<long long>(prev.maps) * prev.h * prev.w : prev.units;
        return static_cast<long long>(s.units) * in + s.units;
    }
    default: return 0;
    }
}

std::string inspect_descriptor(const NetDescriptor& d) {
    std::ostringstream out;
    out << "layer  type             output              kernel  parameters\n";
    long long total = 0;
    for (std::size_t i = 0; i < d.layers.size(); ++i) {
        const LayerSpec& s = d.layers[i];
        const LayerShape& sh = d.shapes[i];
        std::string type, kernel = "-";
        switch (s.kind) {
        case LayerKind::Input: type = "input"; break;
        case LayerKind::Conv:
            type = "convolutional";
            kernel = std::to_string(s.kernel) + "x" + std::to_string(s.kernel);
            break;
        case LayerKind::MaxPool:
            type = "max pooling";
            kernel = std::to_string(s.pool) + "x" + std::to_string(s.pool);
            break;
        case LayerKind::Fully: type = "fully connected"; break;
        }
        std::string shape = sh.spatial ? std::to_string(sh.maps) + " maps of " + std::to_string(sh.h) + "x" +
                                             std::to_string(sh.w) + " neurons"
                                       : std::to_string(sh.units) + " neurons";
        const long long params = layer_param_count(d, i);
        total += params;
        out << i;
        for (std::size_t pad = std::to_string(i).size(); pad < 7; ++pad) out << ' ';
        out << type;
        for (std::size_t pad = type.size(); pad < 17; ++pad) out << ' ';
        out << shape;
        for (std::size_t pad = shape.size(); pad < 20; ++pad) out << ' ';
        out << kernel;
        for (std::size_t pad = kernel.size(); pad < 8; ++pad) out << ' ';
        out << params << "\n";
    }
    out << "total parameters: " << total << "\n";
    return out.str();
}

} // namespace mcdnn
