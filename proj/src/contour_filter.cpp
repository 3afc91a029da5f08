#include "spdenoise/contour_filter.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "parallel.hpp"

namespace spd {

void validate(const FilterConfig& cfg) {
    if (!(cfg.sigma > 1.0) || !std::isfinite(cfg.sigma)) {
        throw std::invalid_argument("sigma must be > 1 so that ln(sigma) is positive, got " +
                                    std::to_string(cfg.sigma));
    }
    if (cfg.delta < 0 || cfg.delta >= 128) {
        throw std::invalid_argument("delta must lie in [0, 128), got " + std::to_string(cfg.delta));
    }
    validate(cfg.match);
}

std::string to_json(const DenoiseReport& report) {
    const auto& c = report.config;
    nlohmann::ordered_json cfg;
    cfg["sigma"] = c.sigma;
    cfg["patch_size"] = c.match.patch_size;
    cfg["mm"] = c.match.mm;
    if (c.match.search_window == kFullSearch) {
        cfg["search_window"] = "full";
    } else {
        cfg["search_window"] = c.match.search_window;
    }
    cfg["delta"] = c.delta;
    cfg["metric"] = c.match.metric == MatchMetric::intensity ? "intensity" : "stencil";
    cfg["kernel"] = c.kernel == SimilarityKernel::literal ? "literal" : "simplified";

    nlohmann::ordered_json j;
    j["config"] = std::move(cfg);
    j["repaired_count"] = report.repaired_count;
    j["fallback_count"] = report.fallback_count;
    j["prefilter_warnings"] = report.prefilter_warnings;
    j["elapsed_ms"] = report.elapsed_ms;
    return j.dump();
}

double stencil_similarity(double d2, double sigma) {
    if (!(sigma > 1.0)) throw std::invalid_argument("sigma must be greater than 1");
    return 1.0 / (std::exp(d2 / sigma) * std::log(sigma));
}

double log_similarity(double d2, double sigma, SimilarityKernel kernel) {
    if (!(sigma > 1.0)) throw std::invalid_argument("sigma must be greater than 1");
    const double base = -d2 / sigma;
    return kernel == SimilarityKernel::literal ? base - std::log(std::log(sigma)) : base;
}

std::vector<double> stencil_weights(std::span<const double> similarities) {
    if (similarities.empty()) throw std::invalid_argument("no similarities to normalize");
    double sum = 0.0;
    for (double s : similarities) {
        if (!(s > 0.0)) throw std::invalid_argument("similarities must be positive");
        sum += s;
    }
    std::vector<double> w;
    w.reserve(similarities.size());
    for (double s : similarities) w.push_back(s / sum);
    return w;
}

std::vector<double> regression_weights(std::span<const double> stencil_d2, double sigma, SimilarityKernel kernel) {
    if (stencil_d2.empty()) throw std::invalid_argument("no candidates to weight");
    std::vector<double> logs;
    logs.reserve(stencil_d2.size());
    for (double d2 : stencil_d2) logs.push_back(log_similarity(d2, sigma, kernel));
    const double peak = *std::max_element(logs.begin(), logs.end());
    std::vector<double> shifted;
    shifted.reserve(logs.size());
    for (double l : logs) shifted.push_back(std::exp(l - peak));
    return stencil_weights(shifted);
}

ContourRepairer::ContourRepairer(const Image& noisy, const NoiseMask& mask, const Image& prefiltered,
                                 const StencilMap& smap, const FilterConfig& cfg)
    : noisy_(noisy), mask_(mask), prefiltered_(prefiltered), smap_(smap), cfg_(cfg),
      search_(noisy, mask, cfg.match, &smap) {
    validate(cfg);
    if (!mask.matches(noisy) || prefiltered.width() != noisy.width() || prefiltered.height() != noisy.height() ||
        smap.width() != noisy.width() || smap.height() != noisy.height()) {
        throw std::invalid_argument("repair inputs differ in dimensions");
    }
}

Restoration ContourRepairer::restore(int x, int y) const {
    Restoration out;
    const int size = cfg_.match.patch_size;
    for (const auto& c : search_.find(x, y)) {
        if (!mask_(c.patch.center_x, c.patch.center_y)) out.survivors.push_back(c);
    }
    if (out.survivors.empty()) {
        out.value = prefiltered_(x, y);
        out.fallback = true;
        return out;
    }

    const auto target_cs = stencil_crop(smap_, PatchRef{x, y, size});
    std::vector<double> d2;
    d2.reserve(out.survivors.size());
    for (const auto& c : out.survivors) d2.push_back(stencil_distance(target_cs, stencil_crop(smap_, c.patch)));
    out.weights = regression_weights(d2, cfg_.sigma, cfg_.kernel);

    double value = 0.0, lo = 255.0, hi = 0.0;
    for (std::size_t i = 0; i < out.survivors.size(); ++i) {
        const double v = noisy_(out.survivors[i].patch.center_x, out.survivors[i].patch.center_y);
        value += out.weights[i] * v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // rounding can push a convex combination just outside its inputs
    out.value = std::clamp(value, lo, hi);
    return out;
}

Restoration restore_pixel(const Image& img, const NoiseMask& mask, const StencilMap& smap, const PatchRef& target,
                          const FilterConfig& cfg) {
    validate(target);
    if (target.size != cfg.match.patch_size) throw std::invalid_argument("target patch size differs from config");
    const auto pre = median_prefilter(img, mask);
    return ContourRepairer(img, mask, pre.image, smap, cfg).restore(target.center_x, target.center_y);
}

DenoiseResult denoise(const Image& img, const FilterConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();

    const auto mask = detect_noise(img, cfg.delta);
    const auto pre = median_prefilter(img, mask);
    const auto smap = stencil_map_prefiltered(pre.image, BoundaryPolicy::clamp, cfg.threads);

    std::vector<std::size_t> flagged;
    flagged.reserve(mask.count());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask.at(i)) flagged.push_back(i);
    }
    if (cfg.order == RepairOrder::reverse) std::reverse(flagged.begin(), flagged.end());

    DenoiseResult result{img, {}};
    result.report.config = cfg;
    result.report.prefilter_warnings = pre.warnings;

    if (!flagged.empty()) {
        const ContourRepairer repairer(img, mask, pre.image, smap, cfg);
        std::vector<double> values(flagged.size());
        std::vector<std::uint8_t> fell_back(flagged.size(), 0);
        const auto width = static_cast<std::size_t>(img.width());
        detail::parallel_for(flagged.size(), cfg.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                const auto r = repairer.restore(static_cast<int>(flagged[i] % width), static_cast<int>(flagged[i] / width));
                values[i] = r.value;
                fell_back[i] = r.fallback ? 1 : 0;
            }
        });
        for (std::size_t i = 0; i < flagged.size(); ++i) {
            result.image.set(flagged[i], values[i]);
            result.report.fallback_count += fell_back[i];
        }
    }
    result.report.repaired_count = flagged.size();
    result.report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
    return result;
}

}  // namespace spd
