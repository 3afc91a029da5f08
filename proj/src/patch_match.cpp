#include "spdenoise/patch_match.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spd {

namespace {

// Mean of the smallest n - outliers entries; reorders `sq`.
double trimmed_mean(std::span<double> sq, std::size_t outliers) {
    const std::size_t keep = sq.size() - outliers;
    if (outliers > 0) {
        std::nth_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(keep), sq.end());
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < keep; ++i) sum += sq[i];
    return sum / static_cast<double>(keep);
}

double wrap_half_pi(double d) {
    double r = std::remainder(d, std::numbers::pi);
    if (r <= -std::numbers::pi / 2) r += std::numbers::pi;
    return r;
}

struct Scored {
    double distance;
    std::size_t order;
    int x;
    int y;
};

bool score_less(const Scored& a, const Scored& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.order < b.order);
}

}  // namespace

void validate(const MatchConfig& cfg) {
    if (cfg.patch_size < 3 || cfg.patch_size % 2 == 0) {
        throw std::invalid_argument("patch size must be odd and >= 3, got " + std::to_string(cfg.patch_size));
    }
    if (cfg.mm < 1) throw std::invalid_argument("mm must be >= 1, got " + std::to_string(cfg.mm));
    if (cfg.search_window != kFullSearch && (cfg.search_window < 1 || cfg.search_window % 2 == 0)) {
        throw std::invalid_argument("search window must be odd or full, got " + std::to_string(cfg.search_window));
    }
}

double weighted_distance(std::span<const double> p, std::span<const double> q, std::size_t outliers) {
    if (p.size() != q.size()) throw std::invalid_argument("patches differ in length");
    if (p.empty() || outliers >= p.size()) {
        throw std::invalid_argument("outlier count " + std::to_string(outliers) + " leaves no pixels of " +
                                    std::to_string(p.size()) + " to compare");
    }
    std::vector<double> sq(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = p[i] - q[i];
        sq[i] = d * d;
    }
    return trimmed_mean(sq, outliers);
}

std::size_t estimate_nn(const NoiseMask& mask, const PatchRef& p, const PatchRef& q) {
    validate(p);
    validate(q);
    if (p.size != q.size) throw std::invalid_argument("patches differ in size");
    const int r = p.radius();
    std::size_t count = 0;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            const bool fp = mask(clamp_coord(p.center_x + dx, mask.width()), clamp_coord(p.center_y + dy, mask.height()));
            const bool fq = mask(clamp_coord(q.center_x + dx, mask.width()), clamp_coord(q.center_y + dy, mask.height()));
            if (fp || fq) ++count;
        }
    }
    const std::size_t n = static_cast<std::size_t>(p.size) * static_cast<std::size_t>(p.size);
    return std::min(count, n - 1);
}

double stencil_distance(std::span<const double> angles_p, std::span<const double> angles_q) {
    if (angles_p.size() != angles_q.size()) throw std::invalid_argument("stencil crops differ in size");
    double sum = 0.0;
    for (std::size_t i = 0; i < angles_p.size(); ++i) {
        const double d = wrap_half_pi(angles_p[i] - angles_q[i]);
        sum += d * d;
    }
    return sum;
}

std::vector<double> stencil_crop(const StencilMap& map, const PatchRef& ref) {
    validate(ref);
    const int r = ref.radius();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(ref.size) * static_cast<std::size_t>(ref.size));
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            out.push_back(map(clamp_coord(ref.center_x + dx, map.width()), clamp_coord(ref.center_y + dy, map.height())).angle);
        }
    }
    return out;
}

PatchSearch::PatchSearch(const Image& img, const NoiseMask& mask, const MatchConfig& cfg, const StencilMap* smap)
    : width_(img.width()), height_(img.height()), radius_(cfg.patch_size / 2), cfg_(cfg) {
    validate(cfg);
    if (!mask.matches(img)) throw std::invalid_argument("noise mask does not match image dimensions");
    if (cfg.metric == MatchMetric::stencil &&
        (smap == nullptr || smap->width() != img.width() || smap->height() != img.height())) {
        throw std::invalid_argument("stencil metric requires a stencil map matching the image");
    }

    // Clamp-padded copies so patch reads need no bounds checks.
    padded_width_ = width_ + 2 * radius_;
    const int padded_height = height_ + 2 * radius_;
    const auto n = static_cast<std::size_t>(padded_width_) * static_cast<std::size_t>(padded_height);
    pixels_.resize(n);
    flags_.resize(n);
    if (cfg.metric == MatchMetric::stencil) angles_.resize(n);
    for (int y = 0; y < padded_height; ++y) {
        const int sy = clamp_coord(y - radius_, height_);
        for (int x = 0; x < padded_width_; ++x) {
            const int sx = clamp_coord(x - radius_, width_);
            const auto i = static_cast<std::size_t>(y) * static_cast<std::size_t>(padded_width_) + static_cast<std::size_t>(x);
            pixels_[i] = img(sx, sy);
            flags_[i] = mask(sx, sy) ? 1 : 0;
            if (!angles_.empty()) angles_[i] = (*smap)(sx, sy).angle;
        }
    }
}

double PatchSearch::intensity_distance(std::span<const double> tp, std::span<const std::uint8_t> tm, int qx, int qy,
                                       std::span<double> scratch) const {
    const int size = cfg_.patch_size;
    std::size_t k = 0;
    std::size_t outliers = 0;
    for (int dy = 0; dy < size; ++dy) {
        const std::size_t row = static_cast<std::size_t>(qy + dy) * static_cast<std::size_t>(padded_width_) +
                                static_cast<std::size_t>(qx);
        for (int dx = 0; dx < size; ++dx, ++k) {
            const double d = tp[k] - pixels_[row + static_cast<std::size_t>(dx)];
            scratch[k] = d * d;
            outliers += (tm[k] | flags_[row + static_cast<std::size_t>(dx)]);
        }
    }
    outliers = std::min(outliers, scratch.size() - 1);
    return trimmed_mean(scratch, outliers);
}

double PatchSearch::angle_distance(std::span<const double> ta, int qx, int qy) const {
    const int size = cfg_.patch_size;
    double sum = 0.0;
    std::size_t k = 0;
    for (int dy = 0; dy < size; ++dy) {
        const std::size_t row = static_cast<std::size_t>(qy + dy) * static_cast<std::size_t>(padded_width_) +
                                static_cast<std::size_t>(qx);
        for (int dx = 0; dx < size; ++dx, ++k) {
            const double d = wrap_half_pi(ta[k] - angles_[row + static_cast<std::size_t>(dx)]);
            sum += d * d;
        }
    }
    return sum;
}

std::vector<ScoredCandidate> PatchSearch::find(int cx, int cy) const {
    if (cx < 0 || cy < 0 || cx >= width_ || cy >= height_) throw std::out_of_range("target center outside image");
    const int size = cfg_.patch_size;
    const auto n = static_cast<std::size_t>(size) * static_cast<std::size_t>(size);

    // Padded coordinates of a patch's top-left corner equal its center coordinates.
    std::vector<double> tp(n);
    std::vector<std::uint8_t> tm(n);
    std::vector<double> ta;
    if (cfg_.metric == MatchMetric::stencil) ta.resize(n);
    for (int dy = 0, k = 0; dy < size; ++dy) {
        for (int dx = 0; dx < size; ++dx, ++k) {
            const auto i = static_cast<std::size_t>(cy + dy) * static_cast<std::size_t>(padded_width_) +
                           static_cast<std::size_t>(cx + dx);
            tp[static_cast<std::size_t>(k)] = pixels_[i];
            tm[static_cast<std::size_t>(k)] = flags_[i];
            if (!ta.empty()) ta[static_cast<std::size_t>(k)] = angles_[i];
        }
    }

    int x0 = 0, x1 = width_ - 1, y0 = 0, y1 = height_ - 1;
    if (cfg_.search_window != kFullSearch) {
        const int h = cfg_.search_window / 2;
        x0 = std::max(0, cx - h);
        x1 = std::min(width_ - 1, cx + h);
        y0 = std::max(0, cy - h);
        y1 = std::min(height_ - 1, cy + h);
    }

    std::vector<Scored> scored;
    scored.reserve(static_cast<std::size_t>(x1 - x0 + 1) * static_cast<std::size_t>(y1 - y0 + 1));
    std::vector<double> scratch(n);
    std::size_t order = 0;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (x == cx && y == cy) continue;
            const double d = cfg_.metric == MatchMetric::stencil ? angle_distance(ta, x, y)
                                                                 : intensity_distance(tp, tm, x, y, scratch);
            scored.push_back({d, order++, x, y});
        }
    }

    const auto keep = std::min(scored.size(), static_cast<std::size_t>(cfg_.mm));
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), score_less);

    std::vector<ScoredCandidate> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        out.push_back({PatchRef{scored[i].x, scored[i].y, size}, scored[i].distance});
    }
    return out;
}

std::vector<ScoredCandidate> find_similar(const Image& img, const NoiseMask& mask, const PatchRef& target,
                                          const MatchConfig& cfg) {
    validate(target);
    if (target.size != cfg.patch_size) throw std::invalid_argument("target patch size differs from match config");
    if (cfg.metric != MatchMetric::intensity) {
        throw std::invalid_argument("find_similar without a stencil map supports only the intensity metric");
    }
    return PatchSearch(img, mask, cfg).find(target.center_x, target.center_y);
}

}  // namespace spd
