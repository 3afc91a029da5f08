#include "spdenoise/stencils.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parallel.hpp"

namespace spd {

namespace {

using Matrix = std::array<std::array<int, 3>, 3>;

constexpr double pi = std::numbers::pi;

std::array<StencilTemplate, kStencilCount> build_bank() {
    const double a_half = std::atan(0.5);
    const double a_two = std::atan(2.0);
    using D = DirectionClass;
    return {{
        {D::horizontal, 1, pi - a_half, Matrix{{{1, 0, 0}, {0, -2, 1}, {0, 0, 0}}}},
        {D::horizontal, 2, a_half, Matrix{{{0, 0, 1}, {1, -2, 0}, {0, 0, 0}}}},
        {D::horizontal, 3, pi / 8, Matrix{{{0, 0, 1}, {0, -2, 1}, {0, 0, 0}}}},
        {D::horizontal, 4, 7 * pi / 8, Matrix{{{1, 0, 0}, {1, -2, 0}, {0, 0, 0}}}},
        {D::horizontal, 5, -pi + a_half, Matrix{{{0, 0, 0}, {0, -2, 1}, {1, 0, 0}}}},
        {D::horizontal, 6, -a_half, Matrix{{{0, 0, 0}, {1, -2, 0}, {0, 0, 1}}}},
        {D::horizontal, 7, -pi / 8, Matrix{{{0, 0, 0}, {0, -2, 1}, {0, 0, 1}}}},
        {D::horizontal, 8, -7 * pi / 8, Matrix{{{0, 0, 0}, {1, -2, 0}, {1, 0, 0}}}},

        {D::vertical, 1, -pi + a_two, Matrix{{{0, 1, 0}, {0, -2, 0}, {1, 0, 0}}}},
        {D::vertical, 2, -a_two, Matrix{{{0, 1, 0}, {0, -2, 0}, {0, 0, 1}}}},
        {D::vertical, 3, 3 * pi / 8, Matrix{{{0, 1, 1}, {0, -2, 0}, {0, 0, 0}}}},
        {D::vertical, 4, 5 * pi / 8, Matrix{{{1, 1, 0}, {0, -2, 0}, {0, 0, 0}}}},
        {D::vertical, 5, pi - a_two, Matrix{{{1, 0, 0}, {0, -2, 0}, {0, 1, 0}}}},
        {D::vertical, 6, a_two, Matrix{{{0, 0, 1}, {0, -2, 0}, {0, 1, 0}}}},
        {D::vertical, 7, -3 * pi / 8, Matrix{{{0, 0, 0}, {0, -2, 0}, {0, 1, 1}}}},
        {D::vertical, 8, -5 * pi / 8, Matrix{{{0, 0, 0}, {0, -2, 0}, {1, 1, 0}}}},

        {D::diagonal, 1, 6 * pi / 8, Matrix{{{0, 1, 0}, {1, -2, 0}, {0, 0, 0}}}},
        {D::diagonal, 2, 2 * pi / 8, Matrix{{{0, 1, 0}, {0, -2, 1}, {0, 0, 0}}}},
        {D::diagonal, 3, -6 * pi / 8, Matrix{{{0, 0, 0}, {1, -2, 0}, {0, 1, 0}}}},
        {D::diagonal, 4, -2 * pi / 8, Matrix{{{0, 0, 0}, {0, -2, 1}, {0, 1, 0}}}},
        {D::diagonal, 5, 4 * pi / 8, Matrix{{{1, 0, 1}, {0, -2, 0}, {0, 0, 0}}}},
        {D::diagonal, 6, pi, Matrix{{{1, 0, 0}, {0, -2, 0}, {1, 0, 0}}}},
        {D::diagonal, 7, 0.0, Matrix{{{0, 0, 1}, {0, -2, 0}, {0, 0, 1}}}},
        {D::diagonal, 8, -4 * pi / 8, Matrix{{{0, 0, 0}, {0, -2, 0}, {1, 0, 1}}}},
    }};
}

// Lower-middle element for even counts.
double lower_median(std::vector<double>& values) {
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
    std::nth_element(values.begin(), mid, values.end());
    return *mid;
}

}  // namespace

std::array<std::pair<int, int>, 2> StencilTemplate::offsets() const {
    std::array<std::pair<int, int>, 2> out{};
    std::size_t n = 0;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            if (matrix[r][c] == 1 && n < 2) out[n++] = {c - 1, r - 1};
        }
    }
    return out;
}

const std::array<StencilTemplate, kStencilCount>& template_bank() {
    static const auto bank = build_bank();
    return bank;
}

PrefilterResult median_prefilter(const Image& img, const NoiseMask& mask) {
    if (!mask.matches(img)) throw std::invalid_argument("noise mask does not match image dimensions");
    PrefilterResult out{img, 0};
    std::vector<double> window;
    window.reserve(kPrefilterMaxWindow * kPrefilterMaxWindow);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (!mask(x, y)) continue;
            bool filled = false;
            for (int r = 1; 2 * r + 1 <= kPrefilterMaxWindow && !filled; ++r) {
                window.clear();
                for (int dy = -r; dy <= r; ++dy) {
                    const int yy = clamp_coord(y + dy, img.height());
                    for (int dx = -r; dx <= r; ++dx) {
                        const int xx = clamp_coord(x + dx, img.width());
                        if (!mask(xx, yy)) window.push_back(img(xx, yy));
                    }
                }
                if (!window.empty()) {
                    out.image.set(x, y, lower_median(window));
                    filled = true;
                }
            }
            if (!filled) {
                out.image.set(x, y, kPrefilterFallback);
                ++out.warnings;
            }
        }
    }
    return out;
}

double stencil_response(const Image& img, int x, int y, const StencilTemplate& tpl, BoundaryPolicy policy) {
    const double center = pixel_at(img, x, y, policy);
    double sum = 0.0;
    for (const auto& [dx, dy] : tpl.offsets()) {
        sum += std::abs(pixel_at(img, x + dx, y + dy, policy) - center);
    }
    return sum;
}

StencilLabel best_stencil(const Image& img, int x, int y, BoundaryPolicy policy) {
    const auto& bank = template_bank();
    StencilLabel best{0, bank[0].angle, stencil_response(img, x, y, bank[0], policy)};
    for (std::size_t i = 1; i < bank.size(); ++i) {
        const double r = stencil_response(img, x, y, bank[i], policy);
        if (r < best.response) best = {static_cast<int>(i), bank[i].angle, r};
    }
    return best;
}

StencilMap stencil_map_prefiltered(const Image& prefiltered, BoundaryPolicy policy, unsigned threads) {
    StencilMap map(prefiltered.width(), prefiltered.height());
    detail::parallel_for(static_cast<std::size_t>(prefiltered.height()), threads,
                         [&](std::size_t begin, std::size_t end) {
                             for (auto y = static_cast<int>(begin); y < static_cast<int>(end); ++y) {
                                 for (int x = 0; x < prefiltered.width(); ++x) {
                                     map(x, y) = best_stencil(prefiltered, x, y, policy);
                                 }
                             }
                         });
    return map;
}

StencilMapResult stencil_map(const Image& img, const NoiseMask& mask, BoundaryPolicy policy, unsigned threads) {
    auto pre = median_prefilter(img, mask);
    return {stencil_map_prefiltered(pre.image, policy, threads), pre.warnings};
}

Image stencil_map_image(const StencilMap& map) {
    std::vector<double> px;
    px.reserve(map.labels().size());
    for (const auto& l : map.labels()) px.push_back(10.0 * l.template_id);
    return Image(map.width(), map.height(), std::move(px));
}

}  // namespace spd
