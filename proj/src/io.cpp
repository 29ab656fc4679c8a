#include "spectra/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <unistd.h>

namespace spectra {

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content << std::flush;
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move output into " + path + ": " + ec.message());
    }
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

nlohmann::json number(double v) {
    if (!std::isfinite(v)) return format_number(v);
    return v;
}

template <class Seq>
std::string sequence_csv(const Seq& s, const char* column) {
    std::string out = std::string("n,") + column + "\n";
    for (int n = 1; n <= s.size(); ++n) out += std::to_string(n) + "," + format_number(s[n]) + "\n";
    return out;
}

}  // namespace

std::string to_csv(const MomentSequence& m) { return sequence_csv(m, "moment"); }
std::string to_csv(const FreeCumulantSequence& c) { return sequence_csv(c, "cumulant"); }

std::string to_csv(const Histogram& h) {
    std::string out = "bin_left,bin_right,mass\n";
    for (std::size_t i = 0; i < h.mass.size(); ++i)
        out += format_number(h.left[i]) + "," + format_number(h.right[i]) + "," + format_number(h.mass[i]) + "\n";
    return out;
}

std::string to_csv(const TrialReport& report) {
    std::string out = "n,mean,standard_error,target,relative_deviation,z_score\n";
    for (const auto& s : report.moments)
        out += std::to_string(s.n) + "," + format_number(s.mean) + "," + format_number(s.standard_error) + "," +
               format_number(s.target) + "," + format_number(s.relative_deviation) + "," +
               format_number(s.z_score) + "\n";
    return out;
}

std::string to_csv(const QuadratureRule& rule) {
    std::string out = "node,weight\n";
    for (int i = 0; i < rule.size(); ++i)
        out += format_number(rule.nodes[i]) + "," + format_number(rule.weights[i]) + "\n";
    return out;
}

nlohmann::json to_json(const MomentSequence& m) {
    nlohmann::json j;
    j["label"] = m.label();
    j["moments"] = nlohmann::json::array();
    for (double v : m.values()) j["moments"].push_back(number(v));
    return j;
}

nlohmann::json to_json(const FreeCumulantSequence& c) {
    nlohmann::json j;
    j["label"] = c.label();
    j["cumulants"] = nlohmann::json::array();
    for (double v : c.values()) j["cumulants"].push_back(number(v));
    return j;
}

nlohmann::json to_json(const SystemConfig& c) {
    return {{"K", c.K},
            {"N", c.N},
            {"M", c.M},
            {"beta", c.beta()},
            {"spreading", to_string(c.spreading)},
            {"chip_law", to_string(c.chip_law)},
            {"sync", to_string(c.sync)},
            {"delay_model", to_string(c.resolved_delay_model())},
            {"waveform", c.waveform.name()},
            {"fading", to_string(c.fading)},
            {"seed", c.seed},
            {"trials", c.trials},
            {"truncation", c.sync == Sync::chip_asynchronous ? c.resolved_truncation() : 0},
            {"freeze_delays", c.freeze_delays},
            {"n_max", c.n_max}};
}

nlohmann::json to_json(const TrialReport& report) {
    nlohmann::json j;
    j["config"] = to_json(report.config);
    j["moments"] = nlohmann::json::array();
    for (const auto& s : report.moments)
        j["moments"].push_back({{"n", s.n},
                                {"mean", number(s.mean)},
                                {"standard_error", number(s.standard_error)},
                                {"target", number(s.target)},
                                {"relative_deviation", number(s.relative_deviation)},
                                {"z_score", number(s.z_score)}});
    return j;
}

nlohmann::json to_json(const QuadratureRule& rule) {
    nlohmann::json j;
    j["requested"] = rule.requested;
    j["nodes"] = rule.nodes;
    j["weights"] = rule.weights;
    j["breakdown_order"] = rule.breakdown_order;
    if (!rule.warning.empty()) j["warning"] = rule.warning;
    return j;
}

}  // namespace spectra
