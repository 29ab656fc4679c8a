// spectra_cdma: command-line front end for the spectra library.
//
// Exit status: 0 success, 1 invalid input, 2 numerical breakdown,
// 3 verification failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectra/aem.hpp"
#include "spectra/io.hpp"
#include "spectra/nc_partitions.hpp"
#include "spectra/quadrature.hpp"
#include "spectra/simulator.hpp"
#include "spectra/waveform.hpp"

using namespace spectra;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_numerical = 2;
constexpr int exit_verify = 3;

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

[[noreturn]] void invalid(const std::string& what) { throw ValidationError(what); }

double parse_double(const std::string& s, const std::string& name) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        invalid("--" + name + ": '" + s + "' is not a number");
    }
    if (used != s.size()) invalid("--" + name + ": '" + s + "' is not a number");
    return v;
}

long long parse_integer(const std::string& s, const std::string& name) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        invalid("--" + name + ": '" + s + "' is not an integer");
    }
    if (used != s.size()) invalid("--" + name + ": '" + s + "' is not an integer");
    return v;
}

std::vector<double> parse_list(const std::string& s, const std::string& name) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(parse_double(item, name));
    }
    return out;
}

/// a:b:step, inclusive of b up to rounding.
std::vector<double> parse_grid(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) invalid("--beta-grid expects a:b:step, got '" + s + "'");
    const double a = parse_double(parts[0], "beta-grid"), b = parse_double(parts[1], "beta-grid"),
                 step = parse_double(parts[2], "beta-grid");
    if (!(step > 0.0)) invalid("--beta-grid step must be positive");
    std::vector<double> out;
    for (long i = 0;; ++i) {
        const double v = a + static_cast<double>(i) * step;
        if (v > b + 1e-9 * std::max(1.0, std::abs(b))) break;
        // 0.1 + 3 * 0.3 should print as 1, not 0.9999999999999999
        out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
}

/// Flags first, then the JSON config file, then defaults. Every value read is
/// echoed into `resolved`.
class Params {
public:
    std::map<std::string, std::string> flags;
    json config = json::object();
    json resolved = json::object();

    bool has(const std::string& name) const { return flags.count(name) > 0 || config.contains(key(name)); }

    std::optional<std::string> raw(const std::string& name) const {
        if (auto it = flags.find(name); it != flags.end()) return it->second;
        if (config.contains(key(name))) {
            const auto& v = config.at(key(name));
            if (v.is_string()) return v.get<std::string>();
            if (v.is_array()) {
                std::string s;
                for (const auto& e : v) s += (s.empty() ? "" : ",") + e.dump();
                return s;
            }
            if (v.is_number_integer()) return std::to_string(v.get<long long>());
            if (v.is_number()) return format_number(v.get<double>());
            if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
            invalid("config key '" + key(name) + "' has an unsupported type");
        }
        return std::nullopt;
    }

    double real(const std::string& name, std::optional<double> fallback = std::nullopt) {
        const auto r = raw(name);
        if (!r && !fallback) invalid("--" + name + " is required");
        const double v = r ? parse_double(*r, name) : *fallback;
        resolved[key(name)] = v;
        return v;
    }

    long long integer(const std::string& name, std::optional<long long> fallback = std::nullopt) {
        const auto r = raw(name);
        if (!r && !fallback) invalid("--" + name + " is required");
        const long long v = r ? parse_integer(*r, name) : *fallback;
        resolved[key(name)] = v;
        return v;
    }

    std::string text(const std::string& name, std::optional<std::string> fallback = std::nullopt) {
        const auto r = raw(name);
        if (!r && !fallback) invalid("--" + name + " is required");
        std::string v = r ? *r : *fallback;
        resolved[key(name)] = v;
        return v;
    }

    bool flag(const std::string& name) {
        const auto r = raw(name);
        const bool v = r && (*r == "true" || *r == "1");
        resolved[key(name)] = v;
        return v;
    }

    std::vector<double> list(const std::string& name, std::optional<std::vector<double>> fallback = std::nullopt) {
        const auto r = raw(name);
        if (!r && !fallback) invalid("--" + name + " is required");
        auto v = r ? parse_list(*r, name) : *fallback;
        if (v.empty()) invalid("--" + name + " must not be empty");
        resolved[key(name)] = v;
        return v;
    }

    /// --beta-grid a:b:step or a single --beta.
    std::vector<double> betas() {
        if (const auto g = raw("beta-grid")) {
            auto v = parse_grid(*g);
            if (v.empty()) invalid("--beta-grid is empty");
            resolved["beta_grid"] = *g;
            return v;
        }
        if (has("beta")) return list("beta");
        invalid("--beta-grid or --beta is required");
    }

private:
    static std::string key(std::string name) {
        for (auto& c : name)
            if (c == '-') c = '_';
        return name;
    }
};

int max_dimension() {
    const char* env = std::getenv("SPECTRA_CDMA_MAX_DIM");
    if (!env || !*env) return 4000;
    const long long v = parse_integer(env, "SPECTRA_CDMA_MAX_DIM");
    if (v < 1) invalid("SPECTRA_CDMA_MAX_DIM must be positive");
    return static_cast<int>(v);
}

void require_beta(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) invalid("--beta must be a non-negative number");
}

int require_n_max(long long n) {
    if (n < 1 || n > 40) invalid("--n-max must lie in [1, 40]");
    return static_cast<int>(n);
}

std::string output_format(Params& p) {
    const auto f = p.text("format", "csv");
    if (f != "csv" && f != "json") invalid("--format must be csv or json");
    return f;
}

void emit(Params& p, const std::string& csv, json body) {
    const auto out = p.text("out", "-");
    if (output_format(p) == "json") {
        body["config"] = p.resolved;
        write_output(out, body.dump(2) + "\n");
        return;
    }
    write_output(out, csv);
    if (out != "-") {
        body["config"] = p.resolved;
        write_output(out + ".meta.json", body.dump(2) + "\n");
    }
}

ChipWaveform waveform_of(Params& p) { return ChipWaveform::parse(p.text("waveform", "sinc")); }

FadingModel fading_of(Params& p) { return parse_fading(p.text("fading", "unfaded")); }

void warn(const std::string& what) { std::cerr << "warning: " << what << "\n"; }

// ---------------------------------------------------------------------------

int cmd_nc(Params& p) {
    json body;
    std::string csv;
    if (p.has("labels")) {
        std::vector<int> labels;
        for (double v : p.list("labels")) labels.push_back(static_cast<int>(v));
        const auto pi = SetPartition::from_labels(labels);
        if (!is_noncrossing(pi)) invalid("partition " + pi.str() + " is crossing");
        const auto kc = kreweras(pi);
        const auto g = build_kgraph(pi);
        body["partition"] = pi.str();
        body["kreweras"] = kc.str();
        body["kgraph_cycles"] = g.cycle_decomposition.str();
        csv = "partition,kreweras,kgraph_cycles\n\"" + pi.str() + "\",\"" + kc.str() + "\",\"" +
              g.cycle_decomposition.str() + "\"\n";
    } else if (p.has("profile")) {
        auto sizes = [&](const std::string& name) {
            std::vector<int> v;
            for (double x : p.list(name)) v.push_back(static_cast<int>(x));
            return ClassSizeProfile(v);
        };
        const auto b = sizes("profile");
        Count c;
        if (p.has("kc-profile")) {
            c = count_by_profile_pair(b, sizes("kc-profile"));
        } else {
            c = count_by_profile(b);
        }
        body["count"] = to_string(c);
        csv = "count\n" + to_string(c) + "\n";
    } else {
        const int n_max = static_cast<int>(p.integer("n-max", 8));
        if (n_max < 1 || n_max > 30) invalid("--n-max must lie in [1, 30] for nc");
        csv = "n,j,narayana,catalan\n";
        body["rows"] = json::array();
        for (int n = 1; n <= n_max; ++n)
            for (int j = 1; j <= n; ++j) {
                const auto nar = to_string(narayana(n, j)), cat = to_string(catalan(n));
                csv += std::to_string(n) + "," + std::to_string(j) + "," + nar + "," + cat + "\n";
                body["rows"].push_back({{"n", n}, {"j", j}, {"narayana", nar}, {"catalan", cat}});
            }
    }
    emit(p, csv, body);
    return exit_ok;
}

MomentSequence moments_of(Params& p, json& body, int n_max) {
    const auto kind = p.text("kind", "cs");
    const double beta = p.real("beta");
    require_beta(beta);
    if (kind == "cs") return mp_moments(n_max, beta);
    if (kind == "cs-faded") {
        const auto power = PowerMomentSpec::parse(p.text("fading", "rayleigh"), n_max);
        body["P"] = power.values();
        return aem_cs_faded_table(n_max, beta, power);
    }
    if (kind == "ca" || kind == "ca-faded") {
        const WMomentTable w(waveform_of(p), n_max);
        body["W"] = w.values();
        if (kind == "ca") return aem_ca_table(n_max, beta, w);
        const auto power = PowerMomentSpec::parse(p.text("fading", "rayleigh"), n_max);
        body["P"] = power.values();
        return aem_ca_faded_table(n_max, beta, w, power);
    }
    if (kind == "quadratic-form") {
        const auto s = p.list("s-moments");
        if (static_cast<int>(s.size()) < n_max) invalid("--s-moments must list at least n-max values");
        std::vector<double> v;
        const MomentSequence sm(s, "S");
        for (int n = 1; n <= n_max; ++n) v.push_back(quadratic_form_moments(n, beta, sm));
        return MomentSequence(std::move(v), "quadratic-form");
    }
    invalid("--kind must be one of cs, ca, cs-faded, ca-faded, quadratic-form");
}

int cmd_moments(Params& p) {
    const int n_max = require_n_max(p.integer("n-max", 20));
    json body;
    const auto m = moments_of(p, body, n_max);
    body.update(to_json(m));
    emit(p, to_csv(m), body);
    return exit_ok;
}

int cmd_cumulants(Params& p) {
    const int n_max = require_n_max(p.integer("n-max", 12));
    json body;
    MomentSequence m;
    if (p.has("moments")) {
        const auto v = p.list("moments");
        if (static_cast<int>(v.size()) < n_max) invalid("--moments must list at least n-max values");
        m = MomentSequence(v, "given");
    } else {
        m = moments_of(p, body, n_max);
    }
    const auto c = cumulants_from_moments(m, n_max);
    body.update(to_json(c));
    emit(p, to_csv(c), body);
    return exit_ok;
}

int cmd_wmoments(Params& p) {
    const int n_max = require_n_max(p.integer("n-max", 8));
    const WMomentTable w(waveform_of(p), n_max);
    std::string csv = "m,w\n";
    for (int m = 1; m <= n_max; ++m) csv += std::to_string(m) + "," + format_number(w[m]) + "\n";
    emit(p, csv, {{"waveform", w.label()}, {"W", w.values()}});
    return exit_ok;
}

SystemConfig system_of(Params& p) {
    SystemConfig c;
    c.K = static_cast<int>(p.integer("K", c.K));
    c.N = static_cast<int>(p.integer("N", c.N));
    c.M = static_cast<int>(p.integer("M", c.M));
    c.trials = static_cast<int>(p.integer("trials", c.trials));
    c.seed = static_cast<std::uint64_t>(p.integer("seed", 1));
    c.n_max = static_cast<int>(p.integer("n-max", 4));
    c.sync = parse_sync(p.text("sync", "chip-sync"));
    c.spreading = parse_spreading(p.text("spreading", "short"));
    c.chip_law = parse_chip_law(p.text("chip-law", "binary"));
    c.delay_model = parse_delay_model(p.text("delays", "auto"));
    c.waveform = waveform_of(p);
    c.fading = fading_of(p);
    c.truncation = static_cast<int>(p.integer("truncation", 0));
    c.freeze_delays = p.flag("freeze-delays");
    if (c.n_max > 12) invalid("--n-max must be <= 12 for simulation");
    c.validate(max_dimension());
    return c;
}

int cmd_simulate(Params& p) {
    const auto config = system_of(p);
    const auto report = run_trials(config);
    emit(p, to_csv(report), to_json(report));
    if (const auto esd = p.raw("esd-out")) {
        const int bins = static_cast<int>(p.integer("bins", 50));
        auto rng = trial_stream(config.seed, 0);
        const auto delays = draw_delays(config, rng);
        const auto chips = generate_spreading(config, rng);
        auto r = config.sync == Sync::chip_synchronous
                     ? build_r_cs(chips, delays)
                     : build_r_ca(chips, delays, config.waveform, config.resolved_truncation());
        r = apply_fading(r, config.fading, rng);
        write_output(*esd, to_csv(empirical_esd(r.matrix, bins)));
    }
    return exit_ok;
}

int cmd_verify(Params& p) {
    const auto config = system_of(p);
    const auto report = run_trials(config);
    bool ok = true;
    std::printf("%3s %14s %12s %14s %10s\n", "n", "mean", "stderr", "target", "z");
    for (const auto& s : report.moments) {
        std::printf("%3d %14.8g %12.4g %14.8g %10.3f\n", s.n, s.mean, s.standard_error, s.target, s.z_score);
        if (!(std::abs(s.z_score) <= 4.0)) ok = false;
    }
    std::printf("%s\n", ok ? "verify: PASS (all |z| <= 4)" : "verify: FAIL (some |z| > 4)");
    if (p.has("out")) emit(p, to_csv(report), to_json(report));
    return ok ? exit_ok : exit_verify;
}

SpectralLaw law_of(Params& p, double beta, double alpha_or_nan) {
    SpectralLaw law;
    law.beta = beta;
    law.fading = fading_of(p);
    law.waveform = std::isnan(alpha_or_nan) ? waveform_of(p) : ChipWaveform::srrc(alpha_or_nan);
    return law;
}

int cmd_quadrature(Params& p) {
    const double beta = p.real("beta");
    require_beta(beta);
    const int points = static_cast<int>(p.integer("points", 0));
    if (points < 0 || points > 20) invalid("--points must lie in [0, 20]");
    const auto rule = spectral_rule(law_of(p, beta, std::nan("")), points);
    if (!rule.warning.empty()) warn(rule.warning);
    emit(p, to_csv(rule), to_json(rule));
    return exit_ok;
}

std::vector<double> alphas_of(Params& p) {
    const auto a = p.list("alpha", std::vector<double>{0.0});
    for (double v : a)
        if (!(v >= 0.0 && v <= 1.0)) invalid("--alpha values must lie in [0, 1]");
    return a;
}

int cmd_efficiency(Params& p) {
    const auto alphas = alphas_of(p);
    const auto betas = p.betas();
    const double ebn0_db = p.real("ebn0-db");
    const auto receiver = p.text("receiver", "opt");
    if (receiver != "opt" && receiver != "mmse") invalid("--receiver must be opt or mmse");
    const int points = static_cast<int>(p.integer("points", 0));
    for (double b : betas)
        if (!(b > 0.0)) invalid("beta grid values must be positive");
    const double ebn0 = db_to_linear(ebn0_db);

    std::string csv = "beta,alpha,ebn0_db,snr_db,c_opt,c_mmse_lb,mmse,closed_form\n";
    json rows = json::array();
    for (double alpha : alphas) {
        for (double beta : betas) {
            const auto law = law_of(p, beta, alpha);
            double snr = NAN, c_opt = NAN, c_mmse = NAN, mmse = NAN, closed = NAN;
            try {
                const auto rule = spectral_rule(law, points);
                if (!rule.warning.empty()) warn(rule.warning);
                auto eff = [&](double s) {
                    return receiver == "opt" ? spectral_efficiency_opt(rule, alpha, beta, s)
                                             : spectral_efficiency_mmse_lb(rule, alpha, beta, s);
                };
                snr = snr_of_ebn0(beta, alpha, ebn0, eff);
                c_opt = spectral_efficiency_opt(rule, alpha, beta, snr);
                c_mmse = spectral_efficiency_mmse_lb(rule, alpha, beta, snr);
                mmse = mmse_value(rule, snr);
                if (alpha == 0.0 && law.fading == FadingModel::unfaded)
                    closed = receiver == "opt" ? closed_form_opt(beta, snr) : closed_form_mmse_eff(beta, snr);
            } catch (const std::domain_error& e) {
                warn("beta=" + format_number(beta) + " alpha=" + format_number(alpha) + ": " + e.what());
            }
            const double snr_db = std::isnan(snr) ? NAN : linear_to_db(snr);
            csv += format_number(beta) + "," + format_number(alpha) + "," + format_number(ebn0_db) + "," +
                   format_number(snr_db) + "," + format_number(c_opt) + "," + format_number(c_mmse) + "," +
                   format_number(mmse) + "," + format_number(closed) + "\n";
            rows.push_back({{"beta", beta},
                            {"alpha", alpha},
                            {"ebn0_db", ebn0_db},
                            {"snr_db", std::isnan(snr_db) ? json("nan") : json(snr_db)},
                            {"c_opt", std::isnan(c_opt) ? json("nan") : json(c_opt)},
                            {"c_mmse_lb", std::isnan(c_mmse) ? json("nan") : json(c_mmse)},
                            {"mmse", std::isnan(mmse) ? json("nan") : json(mmse)},
                            {"closed_form", std::isnan(closed) ? json("nan") : json(closed)}});
        }
    }
    emit(p, csv, {{"rows", rows}});
    return exit_ok;
}

int cmd_mmse(Params& p) {
    const auto alphas = alphas_of(p);
    const auto betas = p.betas();
    const double snr_db = p.real("snr-db");
    const int points = static_cast<int>(p.integer("points", 0));
    for (double b : betas)
        if (!(b > 0.0)) invalid("beta grid values must be positive");
    const double snr = db_to_linear(snr_db);

    std::string csv = "alpha,beta,snr_db,mmse,mmse_closed\n";
    json rows = json::array();
    for (double alpha : alphas) {
        for (double beta : betas) {
            const auto law = law_of(p, beta, alpha);
            double mmse = NAN, closed = NAN;
            try {
                const auto rule = spectral_rule(law, points);
                if (!rule.warning.empty()) warn(rule.warning);
                mmse = mmse_value(rule, snr);
                if (alpha == 0.0 && law.fading == FadingModel::unfaded) closed = closed_form_mmse(beta, snr);
            } catch (const std::domain_error& e) {
                warn("beta=" + format_number(beta) + " alpha=" + format_number(alpha) + ": " + e.what());
            }
            csv += format_number(alpha) + "," + format_number(beta) + "," + format_number(snr_db) + "," +
                   format_number(mmse) + "," + format_number(closed) + "\n";
            rows.push_back({{"alpha", alpha},
                            {"beta", beta},
                            {"snr_db", snr_db},
                            {"mmse", std::isnan(mmse) ? json("nan") : json(mmse)},
                            {"mmse_closed", std::isnan(closed) ? json("nan") : json(closed)}});
        }
    }
    emit(p, csv, {{"rows", rows}});
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral moments, Monte Carlo checks and efficiency curves for random-spreading CDMA"};
    app.require_subcommand(1);

    // every flag is accepted by every command and resolved by Params
    const std::vector<std::pair<std::string, std::string>> options = {
        {"beta", "load K/N (comma list allowed for curves)"},
        {"beta-grid", "a:b:step grid of loads"},
        {"alpha", "roll-off factor(s), comma separated"},
        {"snr-db", "signal-to-noise ratio in dB"},
        {"ebn0-db", "Eb/N0 in dB"},
        {"n-max", "highest moment order"},
        {"points", "quadrature points (0: 10 unfaded, 15 faded)"},
        {"K", "users"},
        {"N", "chips per symbol"},
        {"M", "half window in symbols"},
        {"trials", "Monte Carlo trials"},
        {"seed", "master seed"},
        {"waveform", "sinc | srrc:<alpha> | csv:<path>"},
        {"fading", "unfaded | rayleigh"},
        {"spreading", "short | long"},
        {"sync", "chip-sync | chip-async"},
        {"delays", "auto | zero | integer | symbol | chip"},
        {"chip-law", "binary | gaussian"},
        {"truncation", "R_psi truncation in chips (0: waveform default)"},
        {"freeze-delays", "true to draw delays once for all trials"},
        {"out", "output path ('-' for stdout)"},
        {"format", "csv | json"},
        {"kind", "cs | ca | cs-faded | ca-faded | quadratic-form"},
        {"receiver", "opt | mmse"},
        {"s-moments", "comma list of moments of S (quadratic-form)"},
        {"moments", "comma list of moments (cumulants)"},
        {"labels", "class labels of a partition (nc)"},
        {"profile", "class size profile (nc)"},
        {"kc-profile", "Kreweras complement profile (nc)"},
        {"esd-out", "histogram output path (simulate)"},
        {"bins", "histogram bins (simulate)"},
    };
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"nc", "noncrossing partition counts, Kreweras complements and profile counts"},
        {"moments", "asymptotic eigenvalue moment tables"},
        {"cumulants", "free cumulants of a moment table"},
        {"wmoments", "spectral moments W^(m) of a chip waveform"},
        {"simulate", "Monte Carlo moment statistics of finite crosscorrelation matrices"},
        {"quadrature", "Gauss rule for a limiting spectral law"},
        {"efficiency", "spectral efficiency curves at fixed Eb/N0"},
        {"mmse", "MMSE curves at fixed SNR"},
        {"verify", "Monte Carlo vs asymptotic moments; exit 3 unless all |z| <= 4"},
    };

    std::map<std::string, std::string> values;
    std::string config_path;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config file; flags override it");
        for (const auto& [opt, opt_help] : options) sub->add_option("--" + opt, values[opt], opt_help);
        subs[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    }

    try {
        Params p;
        for (const auto& [name, sub] : subs) {
            if (!sub->parsed()) continue;
            for (const auto& [opt, help] : options)
                if (sub->get_option("--" + opt)->count() > 0) p.flags[opt] = values[opt];
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) invalid("cannot read config file " + config_path);
                try {
                    p.config = json::parse(in);
                } catch (const json::exception& e) {
                    invalid("config file " + config_path + ": " + e.what());
                }
                if (!p.config.is_object()) invalid("config file must hold a JSON object");
            }
            p.resolved["command"] = name;
            if (name == "nc") return cmd_nc(p);
            if (name == "moments") return cmd_moments(p);
            if (name == "cumulants") return cmd_cumulants(p);
            if (name == "wmoments") return cmd_wmoments(p);
            if (name == "simulate") return cmd_simulate(p);
            if (name == "quadrature") return cmd_quadrature(p);
            if (name == "efficiency") return cmd_efficiency(p);
            if (name == "mmse") return cmd_mmse(p);
            if (name == "verify") return cmd_verify(p);
        }
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    }
    return exit_invalid;
}
