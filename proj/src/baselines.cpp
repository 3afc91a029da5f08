#include "spdenoise/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace spd {

namespace {

void check_window(int k, const char* what) {
    if (k < 3 || k % 2 == 0) {
        throw std::invalid_argument(std::string(what) + " must be odd and >= 3, got " + std::to_string(k));
    }
}

void check_same_dims(const Image& a, const Image& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw std::invalid_argument("images differ in dimensions: " + std::to_string(a.width()) + "x" +
                                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                                    std::to_string(b.height()));
    }
}

void gather(const Image& img, int x, int y, int r, std::vector<double>& out) {
    out.clear();
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) out.push_back(pixel_at(img, x + dx, y + dy));
    }
}

}  // namespace

Image median_filter(const Image& img, int k) {
    check_window(k, "median window");
    Image out(img.width(), img.height());
    std::vector<double> window;
    window.reserve(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            gather(img, x, y, k / 2, window);
            const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
            std::nth_element(window.begin(), mid, window.end());
            out.set(x, y, *mid);
        }
    }
    return out;
}

Image adaptive_median_filter(const Image& img, int max_window) {
    check_window(max_window, "adaptive median max window");
    Image out(img.width(), img.height());
    std::vector<double> window;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const double center = img(x, y);
            double value = center;
            for (int k = 3; k <= max_window; k += 2) {
                gather(img, x, y, k / 2, window);
                std::sort(window.begin(), window.end());
                const double lo = window.front();
                const double hi = window.back();
                const double med = window[window.size() / 2];
                if (lo < med && med < hi) {
                    value = (lo < center && center < hi) ? center : med;
                    break;
                }
                if (k == max_window) value = med;
            }
            out.set(x, y, value);
        }
    }
    return out;
}

double mse(const Image& a, const Image& b) {
    check_same_dims(a, b);
    double sum = 0.0;
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double d = pa[i] - pb[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pa.size());
}

Psnr psnr(const Image& reference, const Image& test) {
    const double m = mse(reference, test);
    if (m == 0.0) return {};
    return {10.0 * std::log10(255.0 * 255.0 / m)};
}

std::string Psnr::str(int decimals) const {
    if (infinite()) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, *db);
    return buf;
}

}  // namespace spd
