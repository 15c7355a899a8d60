#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavekin/core.hpp"
#include "wavekin/csvio.hpp"
#include "wavekin/manifest.hpp"
#include "wavekin/moments.hpp"

using namespace wavekin;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               fs::path("wavekin_io_test_" +
                        std::to_string(
                            static_cast<unsigned long>(::getpid())));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("doubles serialize to shortest round-trip form") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(0.0) == "0");
    for (double v : {1.0 / 3.0, 6.02214076e23, 1e-300, 13.98,
                     0.1 + 0.2, 4.300000000008}) {
        CHECK(std::stod(format_double(v)) == v);
        CHECK(std::stod(format_double(-v)) == -v);
    }
}

TEST_CASE("csv round-trip is exact") {
    const TempDir tmp;
    CsvTable table;
    table.header = {"k", "n"};
    table.rows = {{0.1, 1.0 / 3.0}, {2.0, 1e-300}, {3.5, -0.0625}};
    const std::string path = tmp.file("round.csv");
    write_csv(path, table);

    const CsvTable back = read_csv(path);
    REQUIRE(back.header == table.header);
    REQUIRE(back.rows.size() == table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
            CHECK(back.rows[r][c] == table.rows[r][c]);
        }
    }

    // Re-writing parsed data reproduces the bytes.
    const std::string again = tmp.file("round2.csv");
    write_csv(again, back);
    CHECK(slurp(again) == slurp(path));
}

TEST_CASE("csv reader rejects malformed input") {
    const TempDir tmp;

    const std::string ragged = tmp.file("ragged.csv");
    std::ofstream(ragged) << "a,b\n1,2\n3\n";
    CHECK_THROWS_AS((void)read_csv(ragged), std::runtime_error);

    const std::string text = tmp.file("text.csv");
    std::ofstream(text) << "a,b\n1,fish\n";
    CHECK_THROWS_AS((void)read_csv(text), std::runtime_error);

    CHECK_THROWS_AS((void)read_csv(tmp.file("absent.csv")),
                    std::runtime_error);
}

TEST_CASE("domain writers emit documented headers and k-major order") {
    const TempDir tmp;
    const std::vector<double> grid = {1.0, 2.0};

    const std::string spath = tmp.file("spectrum.csv");
    write_spectrum_csv(spath, IsotropicSpectrum(grid, {0.5, 0.25}));
    CHECK(slurp(spath) == "k,n\n1,0.5\n2,0.25\n");

    const std::string rpath = tmp.file("rates.csv");
    write_rate_csv(rpath, RateField{grid,
                                    {1.0, 2.0},
                                    {0.5, 0.75},
                                    {1e-10, 2e-10},
                                    {1e-11, 3e-11}});
    CHECK(slurp(rpath) ==
          "k,gamma,eta,gamma_err,eta_err\n"
          "1,1,0.5,1e-10,1e-11\n"
          "2,2,0.75,2e-10,3e-11\n");

    const MomentHierarchy hierarchy = init_hierarchy(
        IsotropicSpectrum(grid, {1.0, 2.0}), 3, InitKind::gaussian);
    const std::string hpath = tmp.file("hierarchy.csv");
    write_hierarchy_csv(hpath, hierarchy);
    CHECK(slurp(hpath) ==
          "k,p,M\n"
          "1,1,1\n1,2,2\n1,3,6\n"
          "2,1,2\n2,2,8\n2,3,48\n");

    const std::string dpath = tmp.file("deviations.csv");
    write_deviation_csv(dpath, deviations(hierarchy));
    CHECK(slurp(dpath) ==
          "k,p,F\n"
          "1,2,0\n1,3,0\n"
          "2,2,0\n2,3,0\n");
}

TEST_CASE("sha256 agrees with the reference vector") {
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

    const TempDir tmp;
    const std::string path = tmp.file("blob.bin");
    std::ofstream(path, std::ios::binary) << "abc";
    CHECK(sha256_hex_file(path) == sha256_hex("abc"));
    CHECK_THROWS_AS((void)sha256_hex_file(tmp.file("missing.bin")),
                    std::runtime_error);
}

TEST_CASE("run manifest records checks, artifacts, and errors") {
    const TempDir tmp;
    RunManifest manifest("rates", 17);

    const Config cfg =
        Config::parse_string("[grid]\nk_min = 0.5\nk_max = 2\n");
    manifest.set_config_echo(cfg, "demo.cfg");
    manifest.set_field("tolerance_profile", "strict");

    manifest.add_check("alpha", true, "fine", {{"value", 1.5}});
    CHECK(manifest.all_passed());
    manifest.add_check("beta", false, "off by two", {{"value", 2.0}});
    CHECK(!manifest.all_passed());
    CHECK(manifest.failures() == 1);

    const std::string artifact = tmp.file("data.csv");
    std::ofstream(artifact, std::ios::binary) << "k,n\n1,1\n";
    manifest.add_artifact(artifact);
    manifest.add_error("runtime", "exploded politely");
    manifest.set_wall_seconds(0.25);

    const std::string mpath = tmp.file("run_manifest.json");
    manifest.write(mpath);

    const nlohmann::ordered_json doc =
        nlohmann::ordered_json::parse(slurp(mpath));
    CHECK(doc.at("subcommand") == "rates");
    CHECK(doc.at("seed") == 17);
    CHECK(doc.at("config_path") == "demo.cfg");
    CHECK(doc.at("config").at("grid.k_min") == "0.5");
    CHECK(doc.at("tolerance_profile") == "strict");
    REQUIRE(doc.at("checks").size() == 2);
    CHECK(doc.at("checks")[0].at("name") == "alpha");
    CHECK(doc.at("checks")[0].at("passed") == true);
    CHECK(doc.at("checks")[1].at("passed") == false);
    REQUIRE(doc.at("artifacts").size() == 1);
    CHECK(doc.at("artifacts")[0].at("file") == "data.csv");
    CHECK(doc.at("artifacts")[0].at("sha256") ==
          sha256_hex("k,n\n1,1\n"));
    REQUIRE(doc.at("errors").size() == 1);
    CHECK(doc.at("errors")[0].at("code") == "runtime");
    CHECK(doc.at("wall_seconds") == 0.25);

    // Key order is stable for byte-reproducible records.
    const auto& items = doc.items();
    std::vector<std::string> keys;
    for (const auto& it : items) keys.push_back(it.key());
    REQUIRE(keys.size() >= 4);
    CHECK(keys[0] == "tool");
    CHECK(keys[1] == "version");
    CHECK(keys[2] == "subcommand");
    CHECK(keys[3] == "seed");
}
