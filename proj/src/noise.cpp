#include "spdenoise/noise.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace spd {

namespace {

double unit_draw(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

int effective_delta(int delta) { return std::max(delta, 1); }

}  // namespace

void validate(const NoiseConfig& cfg) {
    if (!(cfg.density >= 0.0 && cfg.density <= 1.0)) {
        throw std::invalid_argument("noise density must lie in [0, 1], got " + std::to_string(cfg.density));
    }
    if (!(cfg.salt_ratio >= 0.0 && cfg.salt_ratio <= 1.0)) {
        throw std::invalid_argument("salt ratio must lie in [0, 1], got " + std::to_string(cfg.salt_ratio));
    }
    if (cfg.delta < 0 || cfg.delta >= 128) {
        throw std::invalid_argument("delta must lie in [0, 128), got " + std::to_string(cfg.delta));
    }
}

std::size_t NoiseMask::count() const {
    return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

NoisyImage inject_noise(const Image& img, const NoiseConfig& cfg) {
    validate(cfg);
    NoisyImage out{img, {}};
    std::mt19937_64 gen(cfg.seed);
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (!(unit_draw(gen) < cfg.density)) continue;
        const bool salt = unit_draw(gen) < cfg.salt_ratio;
        double value = salt ? 255.0 : 0.0;
        if (cfg.delta > 0) {
            const auto offset = std::min(static_cast<int>(unit_draw(gen) * cfg.delta), cfg.delta - 1);
            value = salt ? 255.0 - offset : static_cast<double>(offset);
        }
        out.image.set(i, value);
        out.corrupted.push_back(i);
    }
    return out;
}

NoiseMask detect_noise(const Image& img, int delta) {
    if (delta < 0 || delta >= 128) {
        throw std::invalid_argument("delta must lie in [0, 128), got " + std::to_string(delta));
    }
    const double t = effective_delta(delta);
    NoiseMask mask(img.width(), img.height());
    const auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        mask.set(i, px[i] < t || px[i] > 255.0 - t);
    }
    return mask;
}

}  // namespace spd
