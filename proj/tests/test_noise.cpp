#include <doctest.h>

#include <set>

#include "spdenoise/noise.hpp"
#include "support/fixtures.hpp"

using namespace spd;

TEST_CASE("inject_noise with zero density is the identity") {
    const auto img = fixtures::natural_style(64);
    const auto noisy = inject_noise(img, {0.0, 0.5, 0, 42});
    CHECK(noisy.image == img);
    CHECK(noisy.corrupted.empty());
}

TEST_CASE("inject_noise with forced salt") {
    const auto noisy = inject_noise(Image(9, 7, 100.0), {1.0, 1.0, 0, 1});
    for (double v : noisy.image.pixels()) CHECK(v == 255.0);
    CHECK(noisy.corrupted.size() == 63);
}

TEST_CASE("realized density converges to the requested one") {
    const Image img(512, 512, 128.0);
    const auto noisy = inject_noise(img, {0.3, 0.5, 0, 2024});
    const double frac = static_cast<double>(noisy.corrupted.size()) / static_cast<double>(img.size());
    CHECK(std::abs(frac - 0.3) <= 0.01);
    CHECK(std::abs(static_cast<double>(detect_noise(noisy.image, 0).count()) / img.size() - 0.3) <= 0.01);
}

TEST_CASE("injection is deterministic for a fixed seed") {
    const auto img = fixtures::piecewise_constant(64);
    const NoiseConfig cfg{0.4, 0.3, 0, 99};
    const auto a = inject_noise(img, cfg);
    const auto b = inject_noise(img, cfg);
    CHECK(a.image == b.image);
    CHECK(a.corrupted == b.corrupted);
    CHECK_FALSE(inject_noise(img, {0.4, 0.3, 0, 100}).image == a.image);
}

TEST_CASE("salt ratio splits impulses") {
    const Image img(200, 200, 128.0);
    const auto noisy = inject_noise(img, {0.5, 0.25, 0, 5});
    std::size_t salt = 0;
    for (auto i : noisy.corrupted) salt += noisy.image.pixels()[i] == 255.0;
    CHECK(std::abs(static_cast<double>(salt) / noisy.corrupted.size() - 0.25) < 0.02);
}

TEST_CASE("delta > 0 draws impulses from the widened intervals") {
    const Image img(100, 100, 128.0);
    const auto noisy = inject_noise(img, {0.5, 0.5, 3, 8});
    std::set<double> seen;
    for (auto i : noisy.corrupted) {
        const double v = noisy.image.pixels()[i];
        CHECK(((v >= 0 && v < 3) || (v > 252 && v <= 255)));
        seen.insert(v);
    }
    CHECK(seen == std::set<double>{0, 1, 2, 253, 254, 255});
}

TEST_CASE("detect_noise thresholds") {
    const Image img(4, 1, std::vector<double>{0, 255, 1, 254});
    const auto m0 = detect_noise(img, 0);
    CHECK(m0(0, 0));
    CHECK(m0(1, 0));
    CHECK_FALSE(m0(2, 0));
    CHECK_FALSE(m0(3, 0));

    const Image edge(2, 1, std::vector<double>{253, 252});
    const auto m3 = detect_noise(edge, 3);
    CHECK(m3(0, 0));
    CHECK_FALSE(m3(1, 0));
    CHECK(detect_noise(Image(1, 1, 2.0), 3)(0, 0));
    CHECK_FALSE(detect_noise(Image(1, 1, 3.0), 3)(0, 0));

    CHECK_THROWS_AS(detect_noise(img, 128), std::invalid_argument);
    CHECK_THROWS_AS(detect_noise(img, -1), std::invalid_argument);
}

TEST_CASE("detector recovers exactly the injected set on clean-range images") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        for (int delta : {0, 3}) {
            const auto img = fixtures::natural_style(96);
            const auto noisy = inject_noise(img, {0.4, 0.5, delta, seed});
            const auto mask = detect_noise(noisy.image, delta);
            std::vector<std::size_t> flagged;
            for (std::size_t i = 0; i < mask.size(); ++i)
                if (mask.at(i)) flagged.push_back(i);
            CHECK(flagged == noisy.corrupted);
        }
    }
}

TEST_CASE("noise config validation") {
    const Image img(2, 2, 50.0);
    CHECK_THROWS_AS(inject_noise(img, {1.5, 0.5, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(inject_noise(img, {0.5, -0.1, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(inject_noise(img, {0.5, 0.5, 128, 0}), std::invalid_argument);
}
