#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spectra/io.hpp"

using namespace spectra;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(-INFINITY) == "-inf");
    for (double v : {1.0 / 3.0, 2.718281828459045, 1e-300, -123456.789, 42.0})
        CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("atomic file output") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "spectra_io_test";
    fs::create_directories(dir);
    const fs::path file = dir / "out.csv";
    write_output(file.string(), "first\n");
    write_output(file.string(), "second\n");
    CHECK(slurp(file) == "second\n");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
    CHECK(entries == 1);  // no temporary left behind
    CHECK_THROWS(write_output((dir / "missing" / "x.csv").string(), "x"));
    fs::remove_all(dir);
}

TEST_CASE("csv layouts") {
    CHECK(to_csv(mp_moments(3, 1.0)) == "n,moment\n1,1\n2,2\n3,5\n");
    CHECK(to_csv(cs_cumulants(2, 0.5)) == "n,cumulant\n1,1\n2,0.5\n");
    const QuadratureRule rule{{0.25, 0.75}, {0.5, 0.5}, 2, 0, {}};
    CHECK(to_csv(rule) == "node,weight\n0.25,0.5\n0.75,0.5\n");
    Histogram h;
    h.left = {0.0};
    h.right = {1.0};
    h.mass = {1.0};
    CHECK(to_csv(h) == "bin_left,bin_right,mass\n0,1,1\n");
    TrialReport report;
    report.moments.push_back({1, 1.0, 0.0, 1.0, 0.0, 0.0});
    CHECK(to_csv(report) == "n,mean,standard_error,target,relative_deviation,z_score\n1,1,0,1,0,0\n");
}

TEST_CASE("json documents") {
    const auto j = to_json(mp_moments(3, 1.0));
    CHECK(j["moments"] == nlohmann::json::array({1.0, 2.0, 5.0}));
    SystemConfig c;
    c.sync = Sync::chip_asynchronous;
    c.waveform = ChipWaveform::srrc(0.5);
    const auto jc = to_json(c);
    CHECK(jc["sync"] == "chip-async");
    CHECK(jc["waveform"] == "srrc:0.5");
    CHECK(jc["delay_model"] == "symbol");
    CHECK(jc["truncation"] == 30);
    CHECK(jc["beta"] == 0.5);

    TrialReport report;
    report.moments.push_back({1, 1.0, 0.0, 1.0, 0.0, std::nan("")});
    CHECK(to_json(report)["moments"][0]["z_score"] == "nan");

    QuadratureRule broken{{0.5}, {1.0}, 3, 1, "lost positive definiteness"};
    const auto jr = to_json(broken);
    CHECK(jr["breakdown_order"] == 1);
    CHECK(jr.contains("warning"));
}
