#include "mcdnn/model_io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace mcdnn {

namespace {

constexpr char kMagic[4] = {'M', 'C', 'D', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ofstream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ofstream& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put_u64(out, bits);
}

struct Reader {
    std::vector<unsigned char> buf;
    std::size_t pos = 0;
    std::string path;

    void need(std::size_t n) const {
        if (pos + n > buf.size())
            throw DataError("model file '" + path + "' truncated at byte " + std::to_string(pos));
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | buf[pos + static_cast<std::size_t>(i)];
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | buf[pos + static_cast<std::size_t>(i)];
        pos += 8;
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double d;
        std::memcpy(&d, &bits, 8);
        return d;
    }
    std::string str() {
        const std::uint32_t len = u32();
        need(len);
        std::string s(reinterpret_cast<const char*>(buf.data() + pos), len);
        pos += len;
        return s;
    }
    unsigned char byte() {
        need(1);
        return buf[pos++];
    }
};

unsigned char kind_byte(LayerKind k) {
    switch (k) {
    case LayerKind::Conv: return 1;
    case LayerKind::MaxPool: return 2;
    case LayerKind::Fully: return 3;
    default: throw StateError("model io: input layers carry no block");
    }
}

} // namespace

void save_model(const std::string& path, Network& net, const std::string& preprocessor_tag,
                std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    const std::string desc = format_descriptor(net.descriptor());
    put_u32(out, static_cast<std::uint32_t>(desc.size()));
    out.write(desc.data(), static_cast<std::streamsize>(desc.size()));
    put_u32(out, static_cast<std::uint32_t>(preprocessor_tag.size()));
    out.write(preprocessor_tag.data(), static_cast<std::streamsize>(preprocessor_tag.size()));
    put_u64(out, seed);

    const auto params = net.parameters(); // per parametric layer: weights, bias
    std::size_t pi = 0;
    const NetDescriptor& d = net.descriptor();
    for (std::size_t li = 1; li < d.layers.size(); ++li) {
        const LayerKind kind = d.layers[li].kind;
        out.put(static_cast<char>(kind_byte(kind)));
        if (kind == LayerKind::MaxPool) {
            put_u64(out, 0);
            continue;
        }
        const Tensor& w = *params[pi++];
        const Tensor& b = *params[pi++];
        put_u64(out, static_cast<std::uint64_t>(w.size() + b.size()));
        for (std::size_t i = 0; i < w.size(); ++i) put_f64(out, w[i]);
        for (std::size_t i = 0; i < b.size(); ++i) put_f64(out, b[i]);
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

LoadedModel load_model(const std::string& path) {
    Reader r;
    r.path = path;
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw DataError("cannot open '" + path + "'");
        r.buf.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    r.need(4);
    if (std::memcmp(r.buf.data(), kMagic, 4) != 0)
        throw DataError("model file '" + path + "' has wrong magic");
    r.pos = 4;
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw DataError("model file '" + path + "' has unsupported version " + std::to_string(version));
    const std::string desc_text = r.str();
    const std::string tag = r.str();
    const std::uint64_t seed = r.u64();

    NetDescriptor desc = parse_descriptor(desc_text);
    LoadedModel model{Network(std::move(desc)), tag, seed};

    const auto params = model.net.parameters();
    std::size_t pi = 0;
    const NetDescriptor& d = model.net.descriptor();
    for (std::size_t li = 1; li < d.layers.size(); ++li) {
        const LayerKind kind = d.layers[li].kind;
        const unsigned char kb = r.byte();
        if (kb != kind_byte(kind))
            throw DataError("model file '" + path + "' layer " + std::to_string(li) +
                            " kind byte does not match the descriptor");
        const std::uint64_t count = r.u64();
        if (kind == LayerKind::MaxPool) {
            if (count != 0)
                throw DataError("model file '" + path + "' pooling layer " + std::to_string(li) +
                                " carries parameters");
            continue;
        }
        Tensor& w = *params[pi++];
        Tensor& b = *params[pi++];
        if (count != w.size() + b.size())
            throw DataError("model file '" + path + "' layer " + std::to_string(li) + " has " +
                            std::to_string(count) + " parameters, descriptor implies " +
                            std::to_string(w.size() + b.size()));
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = r.f64();
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = r.f64();
    }
    if (r.pos != r.buf.size())
        throw DataError("model file '" + path + "' has " + std::to_string(r.buf.size() - r.pos) +
                        " trailing bytes");
    return model;
}

std::vector<std::string> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest '" + path + "'");
    const fs::path base = fs::path(path).parent_path();
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        fs::path p(line);
        out.push_back(p.is_absolute() ? p.string() : (base / p).string());
    }
    if (out.empty()) throw DataError("manifest '" + path + "' lists no model files");
    return out;
}

void write_manifest(const std::string& path, const std::vector<std::string>& model_paths) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    for (const std::string& p : model_paths) out << p << "\n";
    if (!out) throw DataError("write failed for '" + path + "'");
}

Ensemble load_ensemble(const std::string& path) {
    // model files start with the binary magic, manifests are plain text
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw DataError("cannot open '" + path + "'");
    char head[4] = {};
    probe.read(head, 4);
    std::vector<std::string> paths;
    if (probe.gcount() == 4 && std::memcmp(head, kMagic, 4) == 0)
        paths.push_back(path);
    else
        paths = read_manifest(path);

    Ensemble e;
    for (const std::string& p : paths) {
        LoadedModel m = load_model(p);
        e.columns.emplace_back(std::move(m.net), parse_chain(m.preprocessor_tag), m.seed);
    }
    e.validate();
    return e;
}

} // namespace mcdnn
