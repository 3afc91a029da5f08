#include "spdenoise/spdenoise.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "spdenoise/baselines.hpp"
#include "spdenoise/contour_filter.hpp"
#include "spdenoise/image.hpp"
#include "spdenoise/noise.hpp"
#include "spdenoise/stencils.hpp"

struct spd_image {
    spd::Image image;
};

struct spd_report {
    spd::DenoiseReport report;
};

namespace {

thread_local std::string g_last_error;

class DimensionMismatch : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

spd_status fail(spd_status status, const char* what) {
    g_last_error = what;
    return status;
}

spd_status status_for(spd::ImageErrorKind kind) {
    switch (kind) {
        case spd::ImageErrorKind::unsupported_format: return SPD_ERR_UNSUPPORTED_FORMAT;
        case spd::ImageErrorKind::malformed_header: return SPD_ERR_MALFORMED_HEADER;
        case spd::ImageErrorKind::truncated: return SPD_ERR_TRUNCATED;
        case spd::ImageErrorKind::unsupported_depth: return SPD_ERR_UNSUPPORTED_DEPTH;
        case spd::ImageErrorKind::io: return SPD_ERR_IO;
    }
    return SPD_ERR_INTERNAL;
}

template <class Fn>
spd_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return SPD_OK;
    } catch (const spd::ImageError& e) {
        return fail(status_for(e.kind()), e.what());
    } catch (const DimensionMismatch& e) {
        return fail(SPD_ERR_DIMENSION_MISMATCH, e.what());
    } catch (const ConfigError& e) {
        return fail(SPD_ERR_CONFIG, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SPD_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(SPD_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SPD_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SPD_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SPD_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* name) {
    if (p == nullptr) throw std::invalid_argument(std::string(name) + " must not be null");
}

void require_same_dims(const spd::Image& a, const spd::Image& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw DimensionMismatch("images differ in dimensions: " + std::to_string(a.width()) + "x" +
                                std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()));
    }
}

spd_image* wrap(spd::Image img) { return new spd_image{std::move(img)}; }

spd::FilterConfig to_filter_config(const spd_denoise_config& c) {
    spd::FilterConfig f;
    f.sigma = c.sigma;
    f.match.patch_size = c.patch_size;
    f.match.mm = c.mm;
    f.match.search_window = c.search_window;
    f.match.metric = c.metric == SPD_METRIC_STENCIL ? spd::MatchMetric::stencil : spd::MatchMetric::intensity;
    f.delta = c.delta;
    f.kernel = c.kernel == SPD_KERNEL_SIMPLIFIED ? spd::SimilarityKernel::simplified : spd::SimilarityKernel::literal;
    f.order = c.order == SPD_ORDER_REVERSE ? spd::RepairOrder::reverse : spd::RepairOrder::row_major;
    f.threads = c.threads;
    try {
        spd::validate(f);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return f;
}

}  // namespace

extern "C" {

const char* spd_version(void) { return "1.0.0"; }

const char* spd_last_error(void) { return g_last_error.c_str(); }

const char* spd_status_name(spd_status status) {
    switch (status) {
        case SPD_OK: return "ok";
        case SPD_ERR_INVALID_ARGUMENT: return "invalid argument";
        case SPD_ERR_CONFIG: return "invalid configuration";
        case SPD_ERR_IO: return "i/o error";
        case SPD_ERR_UNSUPPORTED_FORMAT: return "unsupported format";
        case SPD_ERR_MALFORMED_HEADER: return "malformed header";
        case SPD_ERR_TRUNCATED: return "truncated data";
        case SPD_ERR_UNSUPPORTED_DEPTH: return "unsupported bit depth";
        case SPD_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
        case SPD_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

int spd_png_supported(void) { return spd::png_supported() ? 1 : 0; }

void spd_noise_config_init(spd_noise_config* cfg) {
    if (cfg == nullptr) return;
    const spd::NoiseConfig d;
    *cfg = {d.density, d.salt_ratio, d.delta, d.seed};
}

void spd_denoise_config_init(spd_denoise_config* cfg) {
    if (cfg == nullptr) return;
    const spd::FilterConfig d;
    cfg->sigma = d.sigma;
    cfg->patch_size = d.match.patch_size;
    cfg->mm = d.match.mm;
    cfg->search_window = d.match.search_window;
    cfg->delta = d.delta;
    cfg->kernel = SPD_KERNEL_LITERAL;
    cfg->metric = SPD_METRIC_INTENSITY;
    cfg->order = SPD_ORDER_ROW_MAJOR;
    cfg->threads = d.threads;
}

spd_status spd_denoise_config_validate(const spd_denoise_config* cfg) {
    return guarded([&] {
        require(cfg, "config");
        to_filter_config(*cfg);
    });
}

spd_status spd_image_create(int width, int height, const double* pixels, spd_image** out) {
    return guarded([&] {
        require(pixels, "pixels");
        require(out, "out");
        if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
        const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
        *out = wrap(spd::Image(width, height, std::vector<double>(pixels, pixels + n)));
    });
}

spd_status spd_image_load(const char* path, spd_image** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = wrap(spd::read_image_file(path));
    });
}

spd_status spd_image_decode(const uint8_t* bytes, size_t size, spd_image** out) {
    return guarded([&] {
        require(bytes, "bytes");
        require(out, "out");
        *out = wrap(spd::load_image(std::span<const std::uint8_t>(bytes, size)));
    });
}

spd_status spd_image_save(const spd_image* img, const char* path, spd_format format) {
    return guarded([&] {
        require(img, "image");
        require(path, "path");
        spd::write_image_file(img->image, path, format == SPD_FORMAT_PNG ? spd::ImageFormat::png : spd::ImageFormat::pgm);
    });
}

spd_status spd_image_encode(const spd_image* img, spd_format format, uint8_t** bytes, size_t* size) {
    return guarded([&] {
        require(img, "image");
        require(bytes, "bytes");
        require(size, "size");
        const auto data = spd::save_image(img->image, format == SPD_FORMAT_PNG ? spd::ImageFormat::png : spd::ImageFormat::pgm);
        auto* buf = static_cast<uint8_t*>(std::malloc(data.size() == 0 ? 1 : data.size()));
        if (buf == nullptr) throw std::bad_alloc();
        std::memcpy(buf, data.data(), data.size());
        *bytes = buf;
        *size = data.size();
    });
}

void spd_image_destroy(spd_image* img) { delete img; }

int spd_image_width(const spd_image* img) { return img ? img->image.width() : 0; }

int spd_image_height(const spd_image* img) { return img ? img->image.height() : 0; }

const double* spd_image_pixels(const spd_image* img) { return img ? img->image.pixels().data() : nullptr; }

void spd_buffer_free(uint8_t* bytes) { std::free(bytes); }

spd_status spd_add_noise(const spd_image* img, const spd_noise_config* cfg, spd_image** out, size_t* corrupted_count) {
    return guarded([&] {
        require(img, "image");
        require(cfg, "config");
        require(out, "out");
        spd::NoiseConfig c{cfg->density, cfg->salt_ratio, cfg->delta, cfg->seed};
        try {
            spd::validate(c);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        auto noisy = spd::inject_noise(img->image, c);
        if (corrupted_count) *corrupted_count = noisy.corrupted.size();
        *out = wrap(std::move(noisy.image));
    });
}

spd_status spd_detect_noise_count(const spd_image* img, int delta, size_t* count) {
    return guarded([&] {
        require(img, "image");
        require(count, "count");
        *count = spd::detect_noise(img->image, delta).count();
    });
}

spd_status spd_denoise(const spd_image* img, const spd_denoise_config* cfg, spd_image** out, spd_report** report) {
    return guarded([&] {
        require(img, "image");
        require(cfg, "config");
        require(out, "out");
        auto result = spd::denoise(img->image, to_filter_config(*cfg));
        std::unique_ptr<spd_report> rep;
        if (report) rep = std::make_unique<spd_report>(spd_report{result.report});
        *out = wrap(std::move(result.image));
        if (report) *report = rep.release();
    });
}

size_t spd_report_repaired_count(const spd_report* r) { return r ? r->report.repaired_count : 0; }
size_t spd_report_fallback_count(const spd_report* r) { return r ? r->report.fallback_count : 0; }
size_t spd_report_prefilter_warnings(const spd_report* r) { return r ? r->report.prefilter_warnings : 0; }
int64_t spd_report_elapsed_ms(const spd_report* r) { return r ? r->report.elapsed_ms : 0; }

spd_status spd_report_json(const spd_report* report, char** json) {
    return guarded([&] {
        require(report, "report");
        require(json, "json");
        const auto text = spd::to_json(report->report);
        auto* buf = static_cast<char*>(std::malloc(text.size() + 1));
        if (buf == nullptr) throw std::bad_alloc();
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *json = buf;
    });
}

void spd_report_destroy(spd_report* report) { delete report; }

void spd_string_free(char* str) { std::free(str); }

spd_status spd_stencil_map_image(const spd_image* img, int delta, spd_image** out) {
    return guarded([&] {
        require(img, "image");
        require(out, "out");
        const auto mask = spd::detect_noise(img->image, delta);
        *out = wrap(spd::stencil_map_image(spd::stencil_map(img->image, mask).map));
    });
}

spd_status spd_median_filter(const spd_image* img, int k, spd_image** out) {
    return guarded([&] {
        require(img, "image");
        require(out, "out");
        *out = wrap(spd::median_filter(img->image, k));
    });
}

spd_status spd_adaptive_median_filter(const spd_image* img, int max_window, spd_image** out) {
    return guarded([&] {
        require(img, "image");
        require(out, "out");
        *out = wrap(spd::adaptive_median_filter(img->image, max_window));
    });
}

spd_status spd_mse(const spd_image* a, const spd_image* b, double* out) {
    return guarded([&] {
        require(a, "a");
        require(b, "b");
        require(out, "out");
        require_same_dims(a->image, b->image);
        *out = spd::mse(a->image, b->image);
    });
}

spd_status spd_psnr(const spd_image* reference, const spd_image* test, double* db, int* is_infinite) {
    return guarded([&] {
        require(reference, "reference");
        require(test, "test");
        require(db, "db");
        require(is_infinite, "is_infinite");
        require_same_dims(reference->image, test->image);
        const auto p = spd::psnr(reference->image, test->image);
        *is_infinite = p.infinite() ? 1 : 0;
        if (!p.infinite()) *db = *p.db;
    });
}

}  // extern "C"
