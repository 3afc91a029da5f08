#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = SPD_FIXTURE_DIR;

struct Result {
    int code;
    std::string out, err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "spdenoise");
    std::ostringstream out, err;
    const int code = spd::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("spdenoise_cli_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
    static inline int counter = 0;
};

}  // namespace

TEST_CASE("parse_densities") {
    CHECK(spd::cli::parse_densities("0.1..0.5") == std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5});
    CHECK(spd::cli::parse_densities("0.1..0.5:0.2") == std::vector<double>{0.1, 0.3, 0.5});
    CHECK(spd::cli::parse_densities("0.3,0.1") == std::vector<double>{0.3, 0.1});
    CHECK(spd::cli::parse_densities("0") == std::vector<double>{0.0});
    CHECK_THROWS_AS(spd::cli::parse_densities("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(spd::cli::parse_densities("a..b"), std::invalid_argument);
}

TEST_CASE("usage errors") {
    CHECK(cli({}).code == spd::cli::kUsage);
    CHECK(cli({"frobnicate"}).code == spd::cli::kUsage);
    CHECK(cli({"add-noise", "a.pgm", "b.pgm"}).code == spd::cli::kUsage);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("add-noise") {
    TempDir tmp;
    const auto in = (kFixtures / "piecewise_128.pgm").string();
    SUBCASE("density 0 copies the payload") {
        const auto r = cli({"add-noise", in, tmp / "a.pgm", "--density", "0"});
        CHECK(r.code == 0);
        CHECK(slurp(tmp / "a.pgm") == slurp(in));
        CHECK(r.out.find("corrupted 0 of 16384") != std::string::npos);
    }
    SUBCASE("same seed gives byte-identical outputs") {
        REQUIRE(cli({"add-noise", in, tmp / "a.pgm", "--density", "0.3", "--seed", "5"}).code == 0);
        REQUIRE(cli({"add-noise", in, tmp / "b.pgm", "--density", "0.3", "--seed", "5"}).code == 0);
        REQUIRE(cli({"add-noise", in, tmp / "c.pgm", "--density", "0.3", "--seed", "6"}).code == 0);
        CHECK(slurp(tmp / "a.pgm") == slurp(tmp / "b.pgm"));
        CHECK(slurp(tmp / "a.pgm") != slurp(tmp / "c.pgm"));
    }
    SUBCASE("missing input") {
        const auto r = cli({"add-noise", tmp / "nope.pgm", tmp / "out.pgm", "--density", "0.1"});
        CHECK(r.code == spd::cli::kData);
        CHECK_FALSE(r.err.empty());
        CHECK_FALSE(fs::exists(tmp / "out.pgm"));
    }
    SUBCASE("bad density") {
        CHECK(cli({"add-noise", in, tmp / "a.pgm", "--density", "2"}).code == spd::cli::kUsage);
    }
}

TEST_CASE("denoise") {
    TempDir tmp;
    SUBCASE("clean mid-gray image passes through") {
        const auto in = (kFixtures / "gray_64.pgm").string();
        const auto r = cli({"denoise", in, tmp / "o.pgm", "--report", tmp / "r.json"});
        REQUIRE(r.code == 0);
        CHECK(slurp(tmp / "o.pgm") == slurp(in));
        const auto j = nlohmann::json::parse(slurp(tmp / "r.json"));
        CHECK(j["repaired_count"] == 0);
        CHECK(j["config"]["patch_size"] == 7);
        CHECK(j["config"]["search_window"] == 39);
    }
    SUBCASE("sigma must exceed 1") {
        const auto r = cli({"denoise", tmp / "never_read.pgm", tmp / "o.pgm", "--sigma", "1.0"});
        CHECK(r.code == spd::cli::kUsage);
        CHECK(r.err.find("sigma") != std::string::npos);
        CHECK(r.err.find("> 1") != std::string::npos);
        CHECK_FALSE(fs::exists(tmp / "o.pgm"));
    }
    SUBCASE("repaired count equals the injected count") {
        const auto in = (kFixtures / "piecewise_128.pgm").string();
        const auto n = cli({"add-noise", in, tmp / "n.pgm", "--density", "0.1", "--seed", "3"});
        REQUIRE(n.code == 0);
        const auto injected = n.out.substr(10, n.out.find(' ', 10) - 10);
        const auto r = cli({"denoise", tmp / "n.pgm", tmp / "o.pgm", "--report", tmp / "r.json", "--patch-size", "5",
                            "--window", "full", "--stencil-map", tmp / "s.pgm"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(slurp(tmp / "r.json"));
        CHECK(std::to_string(j["repaired_count"].get<std::size_t>()) == injected);
        CHECK(j["config"]["search_window"] == "full");
        CHECK(fs::exists(tmp / "s.pgm"));
    }
    SUBCASE("bad window and kernel values") {
        const auto in = (kFixtures / "gray_32.pgm").string();
        CHECK(cli({"denoise", in, tmp / "o.pgm", "--window", "wide"}).code == spd::cli::kUsage);
        CHECK(cli({"denoise", in, tmp / "o.pgm", "--window", "8"}).code == spd::cli::kUsage);
        CHECK(cli({"denoise", in, tmp / "o.pgm", "--kernel", "gauss"}).code == spd::cli::kUsage);
    }
}

TEST_CASE("evaluate") {
    const auto a = (kFixtures / "gray_64.pgm").string();
    const auto b = (kFixtures / "gray_64_plus16.pgm").string();
    auto r = cli({"evaluate", a, a});
    CHECK(r.code == 0);
    CHECK(r.out.find("PSNR: inf") != std::string::npos);
    r = cli({"evaluate", a, b});
    CHECK(r.code == 0);
    // 10*log10(65025/256) to four decimals
    CHECK(r.out.find("PSNR: 24.0484 dB") != std::string::npos);
    CHECK(r.out.find("MSE: 256.0000") != std::string::npos);
    r = cli({"evaluate", a, (kFixtures / "gray_32.pgm").string()});
    CHECK(r.code == spd::cli::kData);
}

TEST_CASE("benchmark") {
    TempDir tmp;
    const auto in = (kFixtures / "piecewise_128.pgm").string();
    SUBCASE("density 0 leaves the contour method lossless") {
        const auto r = cli({"benchmark", in, "--densities", "0", "--methods", "median,contour", "--out", tmp / "b.json"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(slurp(tmp / "b.json"));
        REQUIRE(j.size() == 2);
        CHECK(j[0]["psnr_db"].is_number());
        CHECK(j[1]["psnr_db"] == "inf");
    }
    SUBCASE("rows are density-major with derived seeds and the contour PSNR falls with density") {
        const auto r = cli({"benchmark", in, "--densities", "0.1,0.3,0.5", "--methods", "median,amf,contour",
                            "--seed", "7", "--out", tmp / "b.json"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::ordered_json::parse(slurp(tmp / "b.json"));
        REQUIRE(j.size() == 9);
        const std::vector<std::string> methods{"median", "amf", "contour"};
        const std::vector<double> densities{0.1, 0.3, 0.5};
        for (std::size_t i = 0; i < 9; ++i) {
            CHECK(j[i]["density"] == densities[i / 3]);
            CHECK(j[i]["method"] == methods[i % 3]);
            CHECK(j[i]["seed"] == 7 + 1000 * (i / 3) + i % 3);
            std::vector<std::string> keys;
            for (auto it = j[i].begin(); it != j[i].end(); ++it) keys.push_back(it.key());
            CHECK(keys == std::vector<std::string>{"density", "method", "psnr_db", "elapsed_ms", "seed"});
        }
        CHECK(j[2]["psnr_db"].get<double>() > j[5]["psnr_db"].get<double>());
        CHECK(j[5]["psnr_db"].get<double>() > j[8]["psnr_db"].get<double>());
        CHECK(r.out.find("Level") == 0);
        CHECK(r.out.find("30%") != std::string::npos);
    }
    SUBCASE("unknown method") {
        const auto r = cli({"benchmark", in, "--methods", "median,bm3d"});
        CHECK(r.code == spd::cli::kUsage);
        CHECK(r.err.find("median, amf, contour") != std::string::npos);
    }
}
