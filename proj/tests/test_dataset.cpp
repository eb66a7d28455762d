#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <vector>

#include "mcdnn/dataset.hpp"
#include "mcdnn/preprocess.hpp"

using namespace mcdnn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("mcdnn_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int counter;
};
int TempDir::counter = 0;

void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void push_be32(std::vector<unsigned char>& v, std::uint32_t x) {
    v.push_back(static_cast<unsigned char>(x >> 24));
    v.push_back(static_cast<unsigned char>(x >> 16));
    v.push_back(static_cast<unsigned char>(x >> 8));
    v.push_back(static_cast<unsigned char>(x));
}

// tiny IDX pair: images 3x2x2, labels {7, 0, 3}
void write_idx_fixture(const std::string& images, const std::string& labels,
                       std::uint32_t image_magic = 2051, std::uint32_t label_count = 3,
                       bool truncate = false) {
    std::vector<unsigned char> im;
    push_be32(im, image_magic);
    push_be32(im, 3);
    push_be32(im, 2);
    push_be32(im, 2);
    for (unsigned char b : {0, 255, 128, 64, 1, 2, 3, 4, 250, 251, 252, 253}) im.push_back(b);
    if (truncate) im.resize(im.size() - 3);
    write_bytes(images, im);

    std::vector<unsigned char> lb;
    push_be32(lb, 2049);
    push_be32(lb, label_count);
    lb.push_back(7);
    lb.push_back(0);
    lb.push_back(3);
    lb.resize(8 + label_count);
    write_bytes(labels, lb);
}

} // namespace

TEST_CASE("idx loading maps bytes onto [-1, 1]") {
    TempDir tmp;
    write_idx_fixture(tmp.file("im"), tmp.file("lb"));
    const Dataset ds = load_idx(tmp.file("im"), tmp.file("lb"));
    REQUIRE(ds.size() == 3);
    CHECK(ds.class_count == 10);
    CHECK(ds.images[0].shape() == std::vector<int>{1, 2, 2});
    CHECK(ds.images[0][0] == -1.0); // byte 0
    CHECK(ds.images[0][1] == 1.0);  // byte 255
    CHECK(ds.labels == std::vector<int>{7, 0, 3});
    for (const Tensor& img : ds.images)
        for (std::size_t i = 0; i < img.size(); ++i) {
            CHECK(img[i] >= -1.0);
            CHECK(img[i] <= 1.0);
        }

    // loaders are bit-deterministic
    const Dataset again = load_idx(tmp.file("im"), tmp.file("lb"));
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t p = 0; p < ds.images[i].size(); ++p)
            CHECK(ds.images[i][p] == again.images[i][p]);
}

TEST_CASE("idx error classes") {
    TempDir tmp;
    SUBCASE("wrong magic") {
        write_idx_fixture(tmp.file("im"), tmp.file("lb"), 2052);
        CHECK_THROWS_WITH_AS(load_idx(tmp.file("im"), tmp.file("lb")), doctest::Contains("2052"),
                             DataError);
    }
    SUBCASE("count mismatch between the two files") {
        write_idx_fixture(tmp.file("im"), tmp.file("lb"), 2051, 4);
        CHECK_THROWS_WITH_AS(load_idx(tmp.file("im"), tmp.file("lb")), doctest::Contains("mismatch"),
                             DataError);
    }
    SUBCASE("truncated payload") {
        write_idx_fixture(tmp.file("im"), tmp.file("lb"), 2051, 3, true);
        CHECK_THROWS_AS(load_idx(tmp.file("im"), tmp.file("lb")), DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_idx(tmp.file("nope"), tmp.file("nope2")), DataError);
    }
}

TEST_CASE("cifar batches") {
    TempDir tmp;
    std::vector<unsigned char> batch;
    for (int rec = 0; rec < 4; ++rec) {
        batch.push_back(static_cast<unsigned char>(rec % 10));
        for (int i = 0; i < 3072; ++i) batch.push_back(static_cast<unsigned char>((rec * 31 + i) % 256));
    }
    write_bytes(tmp.file("batch.bin"), batch);

    const Dataset ds = load_cifar10({tmp.file("batch.bin")});
    REQUIRE(ds.size() == 4);
    CHECK(ds.class_count == 10);
    CHECK(ds.images[0].shape() == std::vector<int>{3, 32, 32});
    CHECK(ds.labels == std::vector<int>{0, 1, 2, 3});
    // channel layout: 1024 R then G then B, row-major inside each plane
    CHECK(ds.images[1][0] == doctest::Approx(2.0 * (31 % 256) / 255.0 - 1.0));

    SUBCASE("truncated file names the byte offset") {
        batch.resize(batch.size() - 10);
        write_bytes(tmp.file("trunc.bin"), batch);
        CHECK_THROWS_WITH_AS(load_cifar10({tmp.file("trunc.bin")}), doctest::Contains("3073"), DataError);
    }
    SUBCASE("bad label") {
        batch[0] = 11;
        write_bytes(tmp.file("badlabel.bin"), batch);
        CHECK_THROWS_WITH_AS(load_cifar10({tmp.file("badlabel.bin")}), doctest::Contains("label"),
                             DataError);
    }
}

TEST_CASE("synthetic shapes are balanced and deterministic") {
    Rng a(5), b(5);
    const Dataset da = synthetic_shapes(a, 100, 4, 16);
    const Dataset db = synthetic_shapes(b, 100, 4, 16);
    REQUIRE(da.size() == 100);
    std::vector<int> counts(4, 0);
    for (int label : da.labels) ++counts[static_cast<std::size_t>(label)];
    for (int c : counts) CHECK(c == 25);
    for (std::size_t i = 0; i < da.size(); ++i)
        for (std::size_t p = 0; p < da.images[i].size(); ++p)
            CHECK(da.images[i][p] == db.images[i][p]);

    Rng c(6);
    CHECK_THROWS_AS(synthetic_shapes(c, 3, 4, 16), ShapeError);
    CHECK_THROWS_AS(synthetic_shapes(c, 10, 7, 16), ShapeError);
}

TEST_CASE("canvas padding") {
    Rng rng(7);
    Dataset ds;
    ds.class_count = 2;
    Tensor img({1, 28, 28});
    fill_uniform(img, rng, -1.0, 1.0);
    ds.images.push_back(img);
    ds.labels.push_back(1);

    const Dataset padded = pad_canvas(ds, 29, 29);
    CHECK(padded.images[0].shape() == std::vector<int>{1, 29, 29});
    // floor((29-28)/2) = 0: source lands at the top-left, margins right/bottom
    CHECK(padded.images[0].at3(0, 0, 0) == img.at3(0, 0, 0));
    for (int x = 0; x < 29; ++x) CHECK(padded.images[0].at3(0, 28, x) == kBackground);
    for (int y = 0; y < 29; ++y) CHECK(padded.images[0].at3(0, y, 28) == kBackground);

    const Dataset same = pad_canvas(ds, 28, 28);
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(same.images[0][i] == img[i]);

    CHECK_THROWS_AS(pad_canvas(ds, 27, 27), ShapeError);
}

TEST_CASE("mcds container round trip") {
    TempDir tmp;
    Rng rng(8);
    Dataset ds;
    ds.class_count = 3;
    ds.name = "fixture";
    for (int i = 0; i < 5; ++i) {
        Tensor img({2, 4, 3});
        fill_uniform(img, rng, -1.0, 1.0);
        ds.images.push_back(img);
        ds.labels.push_back(i % 3);
    }
    save_mcds(ds, tmp.file("a.mcds"));
    const Dataset loaded = load_mcds(tmp.file("a.mcds"));
    REQUIRE(loaded.size() == 5);
    CHECK(loaded.class_count == 3);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(loaded.labels[i] == ds.labels[i]);
        for (std::size_t p = 0; p < ds.images[i].size(); ++p)
            CHECK(loaded.images[i][p] == ds.images[i][p]); // bit-exact doubles
    }

    // save -> load -> save produces identical bytes
    save_mcds(loaded, tmp.file("b.mcds"));
    std::ifstream fa(tmp.file("a.mcds"), std::ios::binary), fb(tmp.file("b.mcds"), std::ios::binary);
    std::vector<char> ba((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::vector<char> bb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(ba == bb);

    SUBCASE("corrupt magic") {
        auto bytes = ba;
        bytes[0] = 'X';
        std::ofstream out(tmp.file("bad.mcds"), std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.close();
        CHECK_THROWS_WITH_AS(load_mcds(tmp.file("bad.mcds")), doctest::Contains("magic"), DataError);
    }
    SUBCASE("trailing bytes") {
        auto bytes = ba;
        bytes.push_back(0);
        std::ofstream out(tmp.file("long.mcds"), std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.close();
        CHECK_THROWS_AS(load_mcds(tmp.file("long.mcds")), DataError);
    }
}

TEST_CASE("portable map files and class directories") {
    TempDir tmp;
    Rng rng(9);

    Tensor gray({1, 5, 7});
    fill_uniform(gray, rng, -1.0, 1.0);
    write_pnm(gray, tmp.file("g.pgm"));
    const Tensor gback = read_pnm(tmp.file("g.pgm"));
    REQUIRE(gback.shape() == gray.shape());
    for (std::size_t i = 0; i < gray.size(); ++i)
        CHECK(std::abs(gback[i] - gray[i]) <= 1.01 / 255.0 * 2.0); // byte quantization

    Tensor color({3, 4, 4});
    fill_uniform(color, rng, -1.0, 1.0);
    write_pnm(color, tmp.file("c.ppm"));
    const Tensor cback = read_pnm(tmp.file("c.ppm"));
    REQUIRE(cback.shape() == color.shape());

    fs::create_directories(tmp.path / "ds" / "a");
    fs::create_directories(tmp.path / "ds" / "b");
    write_pnm(gray, (tmp.path / "ds" / "a" / "0.pgm").string());
    write_pnm(gray, (tmp.path / "ds" / "b" / "0.pgm").string());
    write_pnm(gray, (tmp.path / "ds" / "b" / "1.pgm").string());
    const Dataset ds = load_ppm_dir((tmp.path / "ds").string());
    CHECK(ds.class_count == 2);
    CHECK(ds.size() == 3);
    CHECK(ds.labels == std::vector<int>{0, 1, 1});
}
