#include "mcdnn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "mcdnn/preprocess.hpp"

namespace fs = std::filesystem;

namespace mcdnn {

namespace {

double byte_to_value(unsigned char v) {
    return 2.0 * (static_cast<double>(v) / 255.0) - 1.0;
}

unsigned char value_to_byte(double v) {
    const double s = (std::clamp(v, -1.0, 1.0) + 1.0) / 2.0 * 255.0;
    return static_cast<unsigned char>(std::lround(s));
}

std::vector<unsigned char> read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    in.seekg(0, std::ios::end);
    const std::streamoff len = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<unsigned char> buf(static_cast<std::size_t>(len));
    if (len > 0) in.read(reinterpret_cast<char*>(buf.data()), len);
    if (!in) throw DataError("read failed for '" + path + "'");
    return buf;
}

std::uint32_t be32(const unsigned char* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

std::uint32_t le32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_le32(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_le64(std::ofstream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t le64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

double le_f64(const unsigned char* p) {
    const std::uint64_t bits = le64(p);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
}

void put_le_f64(std::ofstream& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put_le64(out, bits);
}

} // namespace

void Dataset::validate() const {
    if (images.size() != labels.size())
        throw DataError("dataset '" + name + "': " + std::to_string(images.size()) + " images but " +
                        std::to_string(labels.size()) + " labels");
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] < 0 || labels[i] >= class_count)
            throw DataError("dataset '" + name + "': label " + std::to_string(labels[i]) + " at index " +
                            std::to_string(i) + " out of range for " + std::to_string(class_count) +
                            " classes");
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    const auto img = read_all(images_path);
    if (img.size() < 16) throw DataError("IDX image file '" + images_path + "' truncated header");
    const std::uint32_t magic_i = be32(img.data());
    if (magic_i != 2051)
        throw DataError("IDX image file '" + images_path + "' has wrong magic " + std::to_string(magic_i) +
                        ", expected 2051");
    const std::uint32_t count = be32(img.data() + 4);
    const std::uint32_t rows = be32(img.data() + 8);
    const std::uint32_t cols = be32(img.data() + 12);
    const std::size_t need = 16 + static_cast<std::size_t>(count) * rows * cols;
    if (img.size() != need)
        throw DataError("IDX image file '" + images_path + "' payload is " + std::to_string(img.size() - 16) +
                        " bytes, header promises " + std::to_string(need - 16));

    const auto lab = read_all(labels_path);
    if (lab.size() < 8) throw DataError("IDX label file '" + labels_path + "' truncated header");
    const std::uint32_t magic_l = be32(lab.data());
    if (magic_l != 2049)
        throw DataError("IDX label file '" + labels_path + "' has wrong magic " + std::to_string(magic_l) +
                        ", expected 2049");
    const std::uint32_t lcount = be32(lab.data() + 4);
    if (lcount != count)
        throw DataError("IDX pair count mismatch: " + std::to_string(count) + " images vs " +
                        std::to_string(lcount) + " labels");
    if (lab.size() != 8 + static_cast<std::size_t>(lcount))
        throw DataError("IDX label file '" + labels_path + "' payload truncated");

    Dataset ds;
    ds.name = fs::path(images_path).filename().string();
    ds.class_count = 10;
    ds.images.reserve(count);
    ds.labels.reserve(count);
    const unsigned char* px = img.data() + 16;
    for (std::uint32_t i = 0; i < count; ++i) {
        Tensor t({1, static_cast<int>(rows), static_cast<int>(cols)});
        for (std::size_t p = 0; p < static_cast<std::size_t>(rows) * cols; ++p)
            t[p] = byte_to_value(px[static_cast<std::size_t>(i) * rows * cols + p]);
        ds.images.push_back(std::move(t));
        ds.labels.push_back(static_cast<int>(lab[8 + i]));
    }
    ds.validate();
    return ds;
}

Dataset load_cifar10(const std::vector<std::string>& paths) {
    constexpr std::size_t kRecord = 3073;
    Dataset ds;
    ds.name = "cifar10";
    ds.class_count = 10;
    for (const std::string& path : paths) {
        const auto buf = read_all(path);
        if (buf.size() % kRecord != 0)
            throw DataError("CIFAR file '" + path + "' length " + std::to_string(buf.size()) +
                            " is not a multiple of 3073; truncated record at byte offset " +
                            std::to_string(buf.size() / kRecord * kRecord));
        const std::size_t records = buf.size() / kRecord;
        for (std::size_t rec = 0; rec < records; ++rec) {
            const unsigned char* p = buf.data() + rec * kRecord;
            if (*p > 9)
                throw DataError("CIFAR file '" + path + "' record " + std::to_string(rec) + " has label " +
                                std::to_string(*p) + " >= 10");
            Tensor t({3, 32, 32});
            for (std::size_t i = 0; i < 3072; ++i) t[i] = byte_to_value(p[1 + i]);
            ds.images.push_back(std::move(t));
            ds.labels.push_back(static_cast<int>(*p));
        }
    }
    ds.validate();
    return ds;
}

Dataset load_ppm_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) throw DataError("'" + dir + "' is not a directory");
    std::vector<fs::path> classes;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_directory()) classes.push_back(e.path());
    std::sort(classes.begin(), classes.end());
    if (classes.empty()) throw DataError("'" + dir + "' contains no class subdirectories");

    Dataset ds;
    ds.name = fs::path(dir).filename().string();
    ds.class_count = static_cast<int>(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(classes[c]))
            if (e.is_regular_file()) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            ds.images.push_back(read_pnm(f.string()));
            ds.labels.push_back(static_cast<int>(c));
        }
    }
    ds.validate();
    return ds;
}

Dataset synthetic_shapes(Rng& rng, int n, int class_count, int extent) {
    constexpr int kKinds = 6;
    if (class_count < 2 || class_count > kKinds)
        throw ShapeError("synthetic_shapes: class count must be in [2, 6]");
    if (n < class_count) throw ShapeError("synthetic_shapes: need at least one sample per class");
    if (extent < 8) throw ShapeError("synthetic_shapes: extent must be >= 8");

    Dataset ds;
    ds.name = "synthetic";
    ds.class_count = class_count;
    const double c = (extent - 1) / 2.0;
    const int jitter_max = std::max(1, extent / 8);

    for (int i = 0; i < n; ++i) {
        const int label = i % class_count;
        const double jx = rng.uniform(-jitter_max, jitter_max);
        const double jy = rng.uniform(-jitter_max, jitter_max);
        const double cx = c + jx, cy = c + jy;
        const double r = extent / 4.0;

        Tensor img({1, extent, extent}, kBackground);
        for (int y = 0; y < extent; ++y) {
            for (int x = 0; x < extent; ++x) {
                const double dx = x - cx, dy = y - cy;
                bool on = false;
                switch (label) {
                case 0: on = std::abs(dx) <= r && std::abs(dy) <= r; break;           // square
                case 1: on = dx * dx + dy * dy <= r * r; break;                       // disk
                case 2: on = std::abs(dx) <= 1.0 || std::abs(dy) <= 1.0; break;       // cross
                case 3: on = std::fmod(std::abs(dx - dy), 4.0) < 2.0; break;          // stripes
                case 4: {                                                             // ring
                    const double d = std::sqrt(dx * dx + dy * dy);
                    on = d <= r && d >= r - 2.0;
                    break;
                }
                case 5: on = dy >= -r && dy <= r && std::abs(dx) <= (dy + r) / 2.0; break; // triangle
                }
                if (on) img.at3(0, y, x) = 1.0;
            }
        }
        ds.images.push_back(std::move(img));
        ds.labels.push_back(label);
    }
    ds.validate();
    return ds;
}

Tensor pad_canvas_image(const Tensor& image, int target_h, int target_w) {
    if (image.rank() != 3) throw ShapeError("pad_canvas: expected a [maps,h,w] image");
    const int m = image.extent(0), h = image.extent(1), w = image.extent(2);
    if (target_h < h || target_w < w)
        throw ShapeError("pad_canvas: target " + std::to_string(target_h) + "x" + std::to_string(target_w) +
                         " smaller than source " + std::to_string(h) + "x" + std::to_string(w));
    if (target_h == h && target_w == w) return image;
    Tensor out({m, target_h, target_w}, kBackground);
    const int oy = (target_h - h) / 2, ox = (target_w - w) / 2;
    for (int i = 0; i < m; ++i)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) out.at3(i, y + oy, x + ox) = image.at3(i, y, x);
    return out;
}

Dataset pad_canvas(const Dataset& ds, int target_h, int target_w) {
    Dataset out;
    out.labels = ds.labels;
    out.class_count = ds.class_count;
    out.name = ds.name;
    out.images.reserve(ds.images.size());
    for (const Tensor& img : ds.images) out.images.push_back(pad_canvas_image(img, target_h, target_w));
    return out;
}

void save_mcds(const Dataset& ds, const std::string& path) {
    ds.validate();
    if (ds.images.empty()) throw DataError("save_mcds: refusing to write an empty dataset");
    const auto& shape = ds.images.front().shape();
    for (const Tensor& t : ds.images)
        if (t.shape() != shape) throw DataError("save_mcds: images must share one shape");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out.write("MCDS1", 5);
    put_le32(out, static_cast<std::uint32_t>(ds.class_count));
    put_le32(out, static_cast<std::uint32_t>(ds.images.size()));
    put_le32(out, static_cast<std::uint32_t>(shape[0]));
    put_le32(out, static_cast<std::uint32_t>(shape[1]));
    put_le32(out, static_cast<std::uint32_t>(shape[2]));
    for (const Tensor& t : ds.images)
        for (std::size_t i = 0; i < t.size(); ++i) put_le_f64(out, t[i]);
    for (int label : ds.labels) put_le32(out, static_cast<std::uint32_t>(label));
    if (!out) throw DataError("write failed for '" + path + "'");
}

Dataset load_mcds(const std::string& path) {
    const auto buf = read_all(path);
    if (buf.size() < 25) throw DataError("MCDS file '" + path + "' truncated header");
    if (std::memcmp(buf.data(), "MCDS1", 5) != 0)
        throw DataError("MCDS file '" + path + "' has wrong magic");
    const std::uint32_t class_count = le32(buf.data() + 5);
    const std::uint32_t count = le32(buf.data() + 9);
    const std::uint32_t maps = le32(buf.data() + 13);
    const std::uint32_t h = le32(buf.data() + 17);
    const std::uint32_t w = le32(buf.data() + 21);
    const std::size_t pixels = static_cast<std::size_t>(count) * maps * h * w;
    const std::size_t need = 25 + pixels * 8 + static_cast<std::size_t>(count) * 4;
    if (buf.size() != need)
        throw DataError("MCDS file '" + path + "' is " + std::to_string(buf.size()) + " bytes, expected " +
                        std::to_string(need));

    Dataset ds;
    ds.name = fs::path(path).filename().string();
    ds.class_count = static_cast<int>(class_count);
    const unsigned char* px = buf.data() + 25;
    for (std::uint32_t i = 0; i < count; ++i) {
        Tensor t({static_cast<int>(maps), static_cast<int>(h), static_cast<int>(w)});
        for (std::size_t p = 0; p < t.size(); ++p)
            t[p] = le_f64(px + (static_cast<std::size_t>(i) * t.size() + p) * 8);
        ds.images.push_back(std::move(t));
    }
    const unsigned char* lb = buf.data() + 25 + pixels * 8;
    for (std::uint32_t i = 0; i < count; ++i)
        ds.labels.push_back(static_cast<int>(le32(lb + static_cast<std::size_t>(i) * 4)));
    ds.validate();
    return ds;
}

void write_pnm(const Tensor& image, const std::string& path) {
    if (image.rank() != 3 || (image.extent(0) != 1 && image.extent(0) != 3))
        throw DataError("write_pnm: expected a 1- or 3-map image");
    const int m = image.extent(0), h = image.extent(1), w = image.extent(2);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out << (m == 1 ? "P5" : "P6") << "\n" << w << " " << h << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(w) * m);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x)
            for (int i = 0; i < m; ++i)
                row[static_cast<std::size_t>(x) * m + i] = value_to_byte(image.at3(i, y, x));
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

Tensor read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string magic;
    in >> magic;
    if (magic != "P5" && magic != "P6") throw DataError("'" + path + "' is not a binary P5/P6 file");
    int w = 0, h = 0, maxval = 0;
    in >> w >> h >> maxval;
    if (!in || w < 1 || h < 1) throw DataError("'" + path + "' has a bad PNM header");
    if (maxval != 255) throw DataError("'" + path + "': only maxval 255 is supported");
    in.get(); // single whitespace after maxval
    const int m = magic == "P5" ? 1 : 3;
    std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h * m);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw DataError("'" + path + "' pixel data truncated");

    Tensor img({m, h, w});
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int i = 0; i < m; ++i)
                img.at3(i, y, x) = byte_to_value(raw[(static_cast<std::size_t>(y) * w + x) * m + i]);
    return img;
}

} // namespace mcdnn
