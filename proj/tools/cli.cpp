#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "spdenoise/spdenoise.h"

namespace spd::cli {

namespace {

struct ImageDeleter {
    void operator()(spd_image* p) const { spd_image_destroy(p); }
};
struct ReportDeleter {
    void operator()(spd_report* p) const { spd_report_destroy(p); }
};
using ImagePtr = std::unique_ptr<spd_image, ImageDeleter>;
using ReportPtr = std::unique_ptr<spd_report, ReportDeleter>;

/// Carries the exit code chosen for a failed C API call.
class CommandError : public std::runtime_error {
public:
    CommandError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
    int code() const { return code_; }

private:
    int code_;
};

int exit_code_for(spd_status s) {
    switch (s) {
        case SPD_ERR_INVALID_ARGUMENT:
        case SPD_ERR_CONFIG:
            return kUsage;
        default:
            return kData;
    }
}

void check(spd_status s, const std::string& context) {
    if (s != SPD_OK) throw CommandError(exit_code_for(s), context + ": " + spd_last_error());
}

ImagePtr load(const std::string& path) {
    spd_image* img = nullptr;
    check(spd_image_load(path.c_str(), &img), "cannot load '" + path + "'");
    return ImagePtr(img);
}

spd_format format_for(const std::string& path) {
    auto lower = path;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    return lower.size() >= 4 && lower.compare(lower.size() - 4, 4, ".png") == 0 ? SPD_FORMAT_PNG : SPD_FORMAT_PGM;
}

void save(const spd_image* img, const std::string& path) {
    check(spd_image_save(img, path.c_str(), format_for(path)), "cannot save '" + path + "'");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw CommandError(kData, "cannot open '" + path + "' for writing");
    f << text << '\n';
    if (!f) throw CommandError(kData, "write to '" + path + "' failed");
}

struct PsnrValue {
    bool infinite = false;
    double db = 0.0;
};

PsnrValue compute_psnr(const spd_image* ref, const spd_image* test) {
    PsnrValue v;
    int inf = 0;
    check(spd_psnr(ref, test, &v.db, &inf), "cannot compute PSNR");
    v.infinite = inf != 0;
    return v;
}

std::string fixed(double v, int decimals) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(decimals) << v;
    return s.str();
}

std::string psnr_text(const PsnrValue& p) { return p.infinite ? "inf" : fixed(p.db, 4); }

/// Denoiser options shared by `denoise` and `benchmark`.
struct DenoiseOptions {
    double sigma = 0;
    int patch_size = 0;
    int mm = 0;
    std::string window = "39";
    int delta = 0;
    unsigned threads = 1;
    std::string kernel = "literal";
    std::string metric = "intensity";

    void add_to(CLI::App& cmd) {
        cmd.add_option("--sigma", sigma, "Similarity kernel strength (must be > 1)")->capture_default_str();
        cmd.add_option("--patch-size", patch_size, "Odd patch side length")->capture_default_str();
        cmd.add_option("--mm", mm, "Number of nearest patches")->capture_default_str();
        cmd.add_option("--window", window, "Odd search window side, or 'full'")->capture_default_str();
        cmd.add_option("--delta", delta, "Impulse detection half-width")->capture_default_str();
        cmd.add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
        cmd.add_option("--kernel", kernel, "Similarity kernel")
            ->check(CLI::IsMember({"literal", "simplified"}))
            ->capture_default_str();
        cmd.add_option("--metric", metric, "Patch matching metric")
            ->check(CLI::IsMember({"intensity", "stencil"}))
            ->capture_default_str();
    }

    spd_denoise_config to_config() const {
        spd_denoise_config c;
        spd_denoise_config_init(&c);
        c.sigma = sigma;
        c.patch_size = patch_size;
        c.mm = mm;
        if (window == "full") {
            c.search_window = SPD_SEARCH_FULL;
        } else {
            try {
                std::size_t used = 0;
                c.search_window = std::stoi(window, &used);
                if (used != window.size()) throw std::invalid_argument(window);
            } catch (const std::exception&) {
                throw CommandError(kUsage, "--window expects an odd integer or 'full', got '" + window + "'");
            }
            if (c.search_window <= 0) {
                throw CommandError(kUsage, "--window expects an odd integer or 'full', got '" + window + "'");
            }
        }
        c.delta = delta;
        c.threads = threads;
        c.kernel = kernel == "simplified" ? SPD_KERNEL_SIMPLIFIED : SPD_KERNEL_LITERAL;
        c.metric = metric == "stencil" ? SPD_METRIC_STENCIL : SPD_METRIC_INTENSITY;
        check(spd_denoise_config_validate(&c), "invalid denoise configuration");
        return c;
    }

    DenoiseOptions() {
        spd_denoise_config d;
        spd_denoise_config_init(&d);
        sigma = d.sigma;
        patch_size = d.patch_size;
        mm = d.mm;
    }
};

// ---------------------------------------------------------------------------

struct AddNoiseArgs {
    std::string in, out;
    double density = 0.0;
    double salt_ratio = 0.5;
    int delta = 0;
    std::uint64_t seed = 0;
};

int cmd_add_noise(const AddNoiseArgs& a, std::ostream& out) {
    auto img = load(a.in);
    spd_noise_config cfg;
    spd_noise_config_init(&cfg);
    cfg.density = a.density;
    cfg.salt_ratio = a.salt_ratio;
    cfg.delta = a.delta;
    cfg.seed = a.seed;
    spd_image* noisy_raw = nullptr;
    std::size_t corrupted = 0;
    check(spd_add_noise(img.get(), &cfg, &noisy_raw, &corrupted), "cannot add noise");
    ImagePtr noisy(noisy_raw);
    save(noisy.get(), a.out);
    const auto total = static_cast<std::size_t>(spd_image_width(img.get())) * spd_image_height(img.get());
    out << "corrupted " << corrupted << " of " << total << " pixels (fraction "
        << fixed(static_cast<double>(corrupted) / static_cast<double>(total), 6) << ", seed " << a.seed << ")\n";
    return kOk;
}

struct DenoiseArgs {
    std::string in, out, report, stencil_map;
    DenoiseOptions opts;
};

int cmd_denoise(const DenoiseArgs& a, std::ostream& out) {
    const auto cfg = a.opts.to_config();  // reject bad configs before touching files
    auto img = load(a.in);
    spd_image* result_raw = nullptr;
    spd_report* report_raw = nullptr;
    check(spd_denoise(img.get(), &cfg, &result_raw, &report_raw), "denoise failed");
    ImagePtr result(result_raw);
    ReportPtr report(report_raw);
    save(result.get(), a.out);
    if (!a.report.empty()) {
        char* json = nullptr;
        check(spd_report_json(report.get(), &json), "cannot serialize report");
        std::string text(json);
        spd_string_free(json);
        write_text(a.report, text);
    }
    if (!a.stencil_map.empty()) {
        spd_image* map_raw = nullptr;
        check(spd_stencil_map_image(img.get(), cfg.delta, &map_raw), "cannot build stencil map");
        ImagePtr map(map_raw);
        save(map.get(), a.stencil_map);
    }
    out << "repaired " << spd_report_repaired_count(report.get()) << " pixels (fallback "
        << spd_report_fallback_count(report.get()) << ", prefilter warnings "
        << spd_report_prefilter_warnings(report.get()) << ") in " << spd_report_elapsed_ms(report.get()) << " ms\n";
    return kOk;
}

int cmd_evaluate(const std::string& ref_path, const std::string& test_path, std::ostream& out) {
    auto ref = load(ref_path);
    auto test = load(test_path);
    double m = 0.0;
    check(spd_mse(ref.get(), test.get(), &m), "cannot compare images");
    const auto p = compute_psnr(ref.get(), test.get());
    out << "PSNR: " << psnr_text(p) << (p.infinite ? "" : " dB") << '\n';
    out << "MSE: " << fixed(m, 4) << '\n';
    return kOk;
}

const std::vector<std::string> kMethods = {"median", "amf", "contour"};

struct BenchmarkArgs {
    std::string in, out_json;
    std::string densities = "0.1..0.9";
    std::string methods = "median,amf,contour";
    std::uint64_t seed = 0;
    DenoiseOptions opts;
};

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct BenchmarkRow {
    double density;
    std::string method;
    PsnrValue psnr;
    std::int64_t elapsed_ms;
    std::uint64_t seed;
};

ImagePtr run_method(const std::string& method, const spd_image* noisy, const spd_denoise_config& cfg) {
    spd_image* raw = nullptr;
    if (method == "median") {
        check(spd_median_filter(noisy, 3, &raw), "median filter failed");
    } else if (method == "amf") {
        check(spd_adaptive_median_filter(noisy, 11, &raw), "adaptive median filter failed");
    } else {
        check(spd_denoise(noisy, &cfg, &raw, nullptr), "contour denoise failed");
    }
    return ImagePtr(raw);
}

void print_table(const std::vector<BenchmarkRow>& rows, const std::vector<double>& densities,
                 const std::vector<std::string>& methods, std::ostream& out) {
    constexpr int kCol = 12;
    out << std::left << std::setw(8) << "Level";
    for (const auto& m : methods) out << std::right << std::setw(kCol) << m;
    out << '\n';
    std::size_t r = 0;
    for (double d : densities) {
        out << std::left << std::setw(8) << (fixed(d * 100.0, 0) + "%");
        for (std::size_t m = 0; m < methods.size(); ++m, ++r) {
            out << std::right << std::setw(kCol) << (rows[r].psnr.infinite ? "inf" : fixed(rows[r].psnr.db, 2));
        }
        out << '\n';
    }
}

int cmd_benchmark(const BenchmarkArgs& a, std::ostream& out) {
    const auto methods = split_csv(a.methods);
    if (methods.empty()) throw CommandError(kUsage, "no methods given; valid methods: median, amf, contour");
    for (const auto& m : methods) {
        if (std::find(kMethods.begin(), kMethods.end(), m) == kMethods.end()) {
            throw CommandError(kUsage, "unknown method '" + m + "'; valid methods: median, amf, contour");
        }
    }
    std::vector<double> densities;
    try {
        densities = parse_densities(a.densities);
    } catch (const std::invalid_argument& e) {
        throw CommandError(kUsage, e.what());
    }
    const auto cfg = a.opts.to_config();
    auto clean = load(a.in);

    std::vector<BenchmarkRow> rows;
    for (std::size_t di = 0; di < densities.size(); ++di) {
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            const std::uint64_t cell_seed = a.seed + 1000 * di + mi;
            spd_noise_config nc;
            spd_noise_config_init(&nc);
            nc.density = densities[di];
            nc.delta = cfg.delta;
            nc.seed = cell_seed;
            spd_image* noisy_raw = nullptr;
            check(spd_add_noise(clean.get(), &nc, &noisy_raw, nullptr), "cannot add noise");
            ImagePtr noisy(noisy_raw);

            const auto start = std::chrono::steady_clock::now();
            auto restored = run_method(methods[mi], noisy.get(), cfg);
            const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
            rows.push_back({densities[di], methods[mi], compute_psnr(clean.get(), restored.get()), ms, cell_seed});
        }
    }

    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["density"] = r.density;
        row["method"] = r.method;
        if (r.psnr.infinite) {
            row["psnr_db"] = "inf";
        } else {
            row["psnr_db"] = r.psnr.db;
        }
        row["elapsed_ms"] = r.elapsed_ms;
        row["seed"] = r.seed;
        j.push_back(std::move(row));
    }
    if (!a.out_json.empty()) write_text(a.out_json, j.dump(2));
    print_table(rows, densities, methods, out);
    return kOk;
}

}  // namespace

std::vector<double> parse_densities(const std::string& arg) {
    auto to_double = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("bad density '" + s + "' in '" + arg + "' (expected values in [0, 1])");
        }
    };
    std::vector<double> out;
    const auto range = arg.find("..");
    if (range != std::string::npos) {
        const double lo = to_double(arg.substr(0, range));
        std::string rest = arg.substr(range + 2);
        double step = 0.1;
        if (const auto colon = rest.find(':'); colon != std::string::npos) {
            step = to_double(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        const double hi = to_double(rest);
        if (step <= 0.0 || hi < lo) throw std::invalid_argument("bad density range '" + arg + "'");
        const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        for (long i = 0; i <= n; ++i) out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
    } else {
        for (const auto& item : split_csv(arg)) out.push_back(to_double(item));
    }
    if (out.empty()) throw std::invalid_argument("no densities in '" + arg + "'");
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Salt-and-pepper denoising with a patch-based contour prior", "spdenoise"};
    app.require_subcommand(1);

    AddNoiseArgs noise;
    auto* add_noise = app.add_subcommand("add-noise", "Inject salt-and-pepper noise");
    add_noise->add_option("input", noise.in, "Clean input image (PGM or PNG)")->required();
    add_noise->add_option("output", noise.out, "Noisy output image")->required();
    add_noise->add_option("--density", noise.density, "Corruption probability in [0, 1]")->required();
    add_noise->add_option("--salt-ratio", noise.salt_ratio, "Fraction of impulses that are salt")->capture_default_str();
    add_noise->add_option("--delta", noise.delta, "Impulse half-width (0 = pure 0/255)")->capture_default_str();
    add_noise->add_option("--seed", noise.seed, "PRNG seed")->capture_default_str();

    DenoiseArgs dn;
    auto* denoise_cmd = app.add_subcommand("denoise", "Remove salt-and-pepper noise");
    denoise_cmd->add_option("input", dn.in, "Noisy input image")->required();
    denoise_cmd->add_option("output", dn.out, "Denoised output image")->required();
    denoise_cmd->add_option("--report", dn.report, "Write a JSON run report here");
    denoise_cmd->add_option("--stencil-map", dn.stencil_map, "Write the stencil-map debug image here");
    dn.opts.add_to(*denoise_cmd);

    std::string ref_path, test_path;
    auto* evaluate = app.add_subcommand("evaluate", "PSNR and MSE between two images");
    evaluate->add_option("reference", ref_path, "Reference image")->required();
    evaluate->add_option("test", test_path, "Image under test")->required();

    BenchmarkArgs bench;
    auto* benchmark = app.add_subcommand("benchmark", "PSNR grid over noise densities and methods");
    benchmark->add_option("input", bench.in, "Clean input image")->required();
    benchmark->add_option("--densities", bench.densities, "Density list or range")->capture_default_str();
    benchmark->add_option("--methods", bench.methods, "Comma list of median, amf, contour")->capture_default_str();
    benchmark->add_option("--seed", bench.seed, "Base PRNG seed")->capture_default_str();
    benchmark->add_option("--out", bench.out_json, "Write JSON rows here");
    bench.opts.add_to(*benchmark);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (add_noise->parsed()) return cmd_add_noise(noise, out);
        if (denoise_cmd->parsed()) return cmd_denoise(dn, out);
        if (evaluate->parsed()) return cmd_evaluate(ref_path, test_path, out);
        if (benchmark->parsed()) return cmd_benchmark(bench, out);
    } catch (const CommandError& e) {
        err << "error: " << e.what() << '\n';
        return e.code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}

}  // namespace spd::cli
