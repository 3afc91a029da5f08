#pragma once

// Deterministic synthetic test images. Clean intensities stay inside
// [10, 245] so the 0/255 impulse detector has no false positives on them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spdenoise/image.hpp"

namespace spd::fixtures {

inline double clamp_clean(double v) { return std::clamp(v, 10.0, 245.0); }

/// Flat regions with hard edges: background, rectangle, disk, triangle.
inline Image piecewise_constant(int size = 128) {
    Image img(size, size, 60.0);
    const double s = size / 128.0;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            double v = 60.0;
            if (x >= 16 * s && x < 70 * s && y >= 20 * s && y < 60 * s) v = 180.0;
            const double dx = x - 88 * s, dy = y - 84 * s;
            if (dx * dx + dy * dy < (28 * s) * (28 * s)) v = 120.0;
            if (y > 80 * s && x < 56 * s && (x - 8 * s) > (y - 80 * s) * 0.5 && x < 8 * s + (y - 80 * s)) v = 210.0;
            img.set(x, y, v);
        }
    }
    return img;
}

/// Photo-like content: smooth shading, soft-edged shapes and a patch of
/// fine oriented texture.
inline Image natural_style(int size = 256) {
    Image img(size, size);
    const double s = size / 256.0;
    auto soft = [](double signed_dist) { return 1.0 / (1.0 + std::exp(-signed_dist / 0.8)); };
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double fx = x / s, fy = y / s;
            double v = 105.0 + 40.0 * std::sin(fx / 37.0) * std::cos(fy / 53.0) + 0.12 * (fx - fy);

            const double d1 = 48.0 - std::hypot(fx - 80.0, fy - 92.0);
            v += (185.0 - v) * soft(d1 * s);

            const double d2 = std::min({fx - 150.0, 230.0 - fx, fy - 30.0, 95.0 - fy});
            v += (45.0 - v) * soft(d2 * s);

            const double d3 = 30.0 - std::hypot((fx - 190.0) * 0.7, fy - 190.0);
            v += (150.0 + 20.0 * std::sin(fx / 11.0) - v) * soft(d3 * s);

            if (fx > 20.0 && fx < 110.0 && fy > 170.0 && fy < 240.0) {
                v += 18.0 * std::sin((fx + 0.6 * fy) / 4.5);
            }
            img.set(x, y, clamp_clean(v));
        }
    }
    return img;
}

/// Two-tone 64/192 image split by a tilted straight edge.
inline Image two_tone_edge(int size = 256) {
    Image img(size, size);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) img.set(x, y, y > 0.5 * x + size / 4.0 ? 192.0 : 64.0);
    }
    return img;
}

/// Every intensity 0..255 once, row-major.
inline Image gradient16() {
    std::vector<double> px(256);
    for (int i = 0; i < 256; ++i) px[static_cast<std::size_t>(i)] = i;
    return Image(16, 16, std::move(px));
}

inline Image random_image(std::mt19937_64& gen, int w, int h, int lo = 0, int hi = 255) {
    std::uniform_int_distribution<int> dist(lo, hi);
    std::vector<double> px(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    for (auto& p : px) p = dist(gen);
    return Image(w, h, std::move(px));
}

}  // namespace spd::fixtures
