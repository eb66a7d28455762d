#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcdnn/descriptor.hpp"
#include "mcdnn/rng.hpp"

using namespace mcdnn;

namespace {

LayerShape spatial(int m, int h, int w) { return {true, m, h, w, 0}; }
LayerShape flat(int units) { return {false, 0, 0, 0, units}; }

} // namespace

TEST_CASE("digit recognizer chain") {
    const NetDescriptor d = parse_descriptor("1x29x29-20C4-MP2-40C5-MP3-150N-10N");
    REQUIRE(d.shapes.size() == 7);
    CHECK(d.shapes[0] == spatial(1, 29, 29));
    CHECK(d.shapes[1] == spatial(20, 26, 26));
    CHECK(d.shapes[2] == spatial(20, 13, 13));
    CHECK(d.shapes[3] == spatial(40, 9, 9));
    CHECK(d.shapes[4] == spatial(40, 3, 3));
    CHECK(d.shapes[5] == flat(150));
    CHECK(d.shapes[6] == flat(10));
    CHECK(d.class_count() == 10);
}

TEST_CASE("traffic sign architecture with map-prefixed pooling tokens") {
    const NetDescriptor d = parse_descriptor("3x48x48-100C7-MP2-150C4-150MP2-250C4-250MP2-300N-43N");
    REQUIRE(d.shapes.size() == 9);
    CHECK(d.shapes[0] == spatial(3, 48, 48));
    CHECK(d.shapes[1] == spatial(100, 42, 42));
    CHECK(d.shapes[2] == spatial(100, 21, 21));
    CHECK(d.shapes[3] == spatial(150, 18, 18));
    CHECK(d.shapes[4] == spatial(150, 9, 9));
    CHECK(d.shapes[5] == spatial(250, 6, 6));
    CHECK(d.shapes[6] == spatial(250, 3, 3));
    CHECK(d.shapes[7] == flat(300));
    CHECK(d.shapes[8] == flat(43));
}

TEST_CASE("deep rgb architecture down to 1x1 maps") {
    const NetDescriptor d =
        parse_descriptor("3x32x32-300C3-MP2-300C2-MP2-300C2-MP2-300C2-MP2-300N-100N-10N");
    REQUIRE(d.shapes.size() == 12);
    CHECK(d.shapes[1] == spatial(300, 30, 30));
    CHECK(d.shapes[2] == spatial(300, 15, 15));
    CHECK(d.shapes[3] == spatial(300, 14, 14));
    CHECK(d.shapes[4] == spatial(300, 7, 7));
    CHECK(d.shapes[5] == spatial(300, 6, 6));
    CHECK(d.shapes[6] == spatial(300, 3, 3));
    CHECK(d.shapes[7] == spatial(300, 2, 2));
    CHECK(d.shapes[8] == spatial(300, 1, 1));
    CHECK(d.shapes[9] == flat(300));
    CHECK(d.shapes[10] == flat(100));
    CHECK(d.shapes[11] == flat(10));
}

TEST_CASE("other published nets parse with a final spatial extent >= 1") {
    const char* nets[] = {
        "2x48x48-100C5-MP2-100C5-MP2-100C4-MP2-300N-100N-6N",
        "1x48x48-100C3-MP2-200C2-MP2-300C2-MP2-400C2-MP2-500N-3755N",
        "2x48x48-50C5-MP2-50C5-MP2-50C4-MP2-300N-100N-6N",
    };
    for (const char* text : nets) {
        const NetDescriptor d = parse_descriptor(text);
        const LayerShape* last_spatial = nullptr;
        for (const LayerShape& s : d.shapes)
            if (s.spatial) last_spatial = &s;
        REQUIRE(last_spatial != nullptr);
        CHECK(last_spatial->h >= 1);
        CHECK(last_spatial->w >= 1);
    }
}

TEST_CASE("parse errors name the offending token") {
    CHECK_THROWS_WITH_AS(parse_descriptor("1x29x29-MP2-10N"), doctest::Contains("MP2"), ParseError);
    CHECK_THROWS_WITH_AS(parse_descriptor("1x29x29-20X4-10N"), doctest::Contains("20X4"), ParseError);
    CHECK_THROWS_WITH_AS(parse_descriptor("20C4-MP2-10N"), doctest::Contains("20C4"), ParseError);
    CHECK_THROWS_WITH_AS(parse_descriptor("1x8x8-100C9-10N"), doctest::Contains("100C9"), ParseError);
    CHECK_THROWS_WITH_AS(parse_descriptor("1x8x8-4C3-150MP2-10N"), doctest::Contains("150MP2"), ParseError);
    CHECK_THROWS_WITH_AS(parse_descriptor("1x8x8-4C3-MP2-10N-4C2-3N"), doctest::Contains("4C2"), ParseError);
    CHECK_THROWS_AS(parse_descriptor("1x8x8-4C3-MP3"), ParseError);   // last token not fully connected
    CHECK_THROWS_AS(parse_descriptor("1x8x8-MP1-10N"), ParseError);   // pool size below 2
    CHECK_THROWS_AS(parse_descriptor(""), ParseError);
}

TEST_CASE("format canonicalizes and round-trips") {
    const std::string text = "3x48x48-100C7-MP2-150C4-150MP2-250C4-250MP2-300N-43N";
    const NetDescriptor d = parse_descriptor(text);
    const std::string canonical = format_descriptor(d);
    CHECK(canonical == "3x48x48-100C7-MP2-150C4-MP2-250C4-MP2-300N-43N");
    const NetDescriptor d2 = parse_descriptor(canonical);
    CHECK(d2.layers == d.layers);
    CHECK(d2.shapes == d.shapes);

    const std::string mnist = "1x29x29-20C4-MP2-40C5-MP3-150N-10N";
    CHECK(format_descriptor(parse_descriptor(mnist)) == mnist);

    const std::string deep = "3x32x32-300C3-MP2-300C2-MP2-300C2-MP2-300C2-MP2-300N-100N-10N";
    CHECK(format_descriptor(parse_descriptor(deep)) == deep);
}

TEST_CASE("random valid descriptors always round-trip") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        // build a valid net by construction
        int maps = 1 + static_cast<int>(rng.below(3));
        int h = 12 + 2 * static_cast<int>(rng.below(12));
        int w = h;
        std::string text = std::to_string(maps) + "x" + std::to_string(h) + "x" + std::to_string(w);
        const int spatial_layers = static_cast<int>(rng.below(4));
        for (int i = 0; i < spatial_layers; ++i) {
            if (rng.below(2) == 0) {
                const int k = 1 + static_cast<int>(rng.below(3));
                if (h - k + 1 < 2) continue;
                const int m = 1 + static_cast<int>(rng.below(8));
                text += "-" + std::to_string(m) + "C" + std::to_string(k);
                h = h - k + 1;
                w = h;
            } else if (h % 2 == 0) {
                text += "-MP2";
                h /= 2;
                w = h;
            }
        }
        const int hidden = static_cast<int>(rng.below(3));
        for (int i = 0; i < hidden; ++i) text += "-" + std::to_string(1 + rng.below(20)) + "N";
        text += "-" + std::to_string(2 + rng.below(9)) + "N";

        const NetDescriptor d = parse_descriptor(text);
        const NetDescriptor d2 = parse_descriptor(format_descriptor(d));
        CHECK(d2.layers == d.layers);
    }
}

TEST_CASE("layer table lists shapes and parameter counts") {
    const NetDescriptor d = parse_descriptor("3x48x48-100C7-MP2-150C4-MP2-250C4-MP2-300N-43N");
    const std::string table = inspect_descriptor(d);
    CHECK(table.find("100 maps of 42x42 neurons") != std::string::npos);
    CHECK(table.find("150 maps of 9x9 neurons") != std::string::npos);
    CHECK(table.find("43 neurons") != std::string::npos);
    CHECK(table.find("7x7") != std::string::npos);
    // conv1: 100*3*49+100, fully 300: 300*2250+300, out: 43*300+43
    CHECK(layer_param_count(d, 1) == 100 * 3 * 7 * 7 + 100);
    CHECK(layer_param_count(d, 7) == 300LL * 250 * 3 * 3 + 300);
    CHECK(layer_param_count(d, 8) == 43LL * 300 + 43);
}
