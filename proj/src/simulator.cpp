#include "spectra/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace spectra {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

template <class E>
E parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, E>> table, const char* what) {
    for (const auto& [name, value] : table)
        if (s == name) return value;
    std::string options;
    for (const auto& [name, value] : table) options += options.empty() ? name : std::string(", ") + name;
    bad(std::string("unknown ") + what + " '" + s + "' (expected one of " + options + ")");
}

bool is_integer(double x) { return std::floor(x) == x; }

}  // namespace

std::string to_string(Spreading s) { return s == Spreading::short_code ? "short" : "long"; }
std::string to_string(ChipLaw c) { return c == ChipLaw::binary ? "binary" : "gaussian"; }
std::string to_string(Sync s) { return s == Sync::chip_synchronous ? "chip-sync" : "chip-async"; }
std::string to_string(FadingModel f) { return f == FadingModel::unfaded ? "unfaded" : "rayleigh"; }
std::string to_string(DelayModel d) {
    switch (d) {
    case DelayModel::automatic: return "auto";
    case DelayModel::zero: return "zero";
    case DelayModel::integer_uniform: return "integer";
    case DelayModel::symbol_uniform: return "symbol";
    case DelayModel::chip_uniform: return "chip";
    }
    return "?";
}

Spreading parse_spreading(const std::string& s) {
    return parse_enum<Spreading>(s, {{"short", Spreading::short_code}, {"long", Spreading::long_code}}, "spreading");
}
ChipLaw parse_chip_law(const std::string& s) {
    return parse_enum<ChipLaw>(s, {{"binary", ChipLaw::binary}, {"gaussian", ChipLaw::gaussian}}, "chip law");
}
Sync parse_sync(const std::string& s) {
    return parse_enum<Sync>(s,
                            {{"chip-sync", Sync::chip_synchronous},
                             {"cs", Sync::chip_synchronous},
                             {"chip-async", Sync::chip_asynchronous},
                             {"ca", Sync::chip_asynchronous}},
                            "synchronism");
}
DelayModel parse_delay_model(const std::string& s) {
    return parse_enum<DelayModel>(s,
                                  {{"auto", DelayModel::automatic},
                                   {"zero", DelayModel::zero},
                                   {"integer", DelayModel::integer_uniform},
                                   {"symbol", DelayModel::symbol_uniform},
                                   {"chip", DelayModel::chip_uniform}},
                                  "delay model");
}
FadingModel parse_fading(const std::string& s) {
    return parse_enum<FadingModel>(
        s, {{"unfaded", FadingModel::unfaded}, {"none", FadingModel::unfaded}, {"rayleigh", FadingModel::rayleigh}},
        "fading model");
}

DelayModel SystemConfig::resolved_delay_model() const {
    if (delay_model != DelayModel::automatic) return delay_model;
    return sync == Sync::chip_synchronous ? DelayModel::integer_uniform : DelayModel::symbol_uniform;
}

int SystemConfig::resolved_truncation() const { return truncation > 0 ? truncation : waveform.default_truncation(); }

void SystemConfig::validate(int max_dimension) const {
    if (K < 1 || N < 1 || M < 0) bad("K and N must be >= 1 and M >= 0");
    if (trials < 1) bad("trials must be >= 1");
    if (n_max < 1) bad("n_max must be >= 1");
    if (truncation < 0) bad("truncation must be >= 0");
    if (static_cast<long long>(2 * M + 1) * K > max_dimension) {
        std::ostringstream os;
        os << "matrix dimension (2M+1)K = " << static_cast<long long>(2 * M + 1) * K << " exceeds the cap "
           << max_dimension;
        bad(os.str());
    }
    const auto d = resolved_delay_model();
    if (sync == Sync::chip_synchronous && d != DelayModel::zero && d != DelayModel::integer_uniform)
        bad("chip-synchronous systems need zero or integer delays");
    if (sync == Sync::chip_asynchronous && resolved_truncation() < waveform.minimum_truncation()) {
        std::ostringstream os;
        os << "truncation " << resolved_truncation() << " is below the minimum " << waveform.minimum_truncation()
           << " for waveform " << waveform.name();
        bad(os.str());
    }
}

Rng trial_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

// ---------------------------------------------------------------------------

ChipTable::ChipTable(int K, int N, int M, std::vector<double> raw, double divisor)
    : K_(K), N_(N), M_(M), raw_(std::move(raw)), divisor_(divisor) {
    if (K < 1 || N < 1 || M < 0) bad("chip table dimensions must be positive");
    if (raw_.size() != static_cast<std::size_t>(K) * (2 * M + 1) * N) bad("chip table has the wrong number of chips");
    if (!(divisor > 0.0)) bad("chip divisor must be positive");
}

double ChipTable::operator()(int k, int m, int q) const { return raw(k, m, q) / std::sqrt(divisor_); }

ChipTable generate_spreading(const SystemConfig& config, Rng& rng) {
    const int K = config.K, N = config.N, M = config.M;
    std::vector<double> raw(static_cast<std::size_t>(K) * (2 * M + 1) * N);
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw = [&] { return config.chip_law == ChipLaw::binary ? (coin(rng) ? 1.0 : -1.0) : gauss(rng); };
    std::size_t i = 0;
    for (int k = 0; k < K; ++k) {
        const std::size_t first = i;
        for (int m = -M; m <= M; ++m) {
            for (int q = 0; q < N; ++q, ++i) {
                if (config.spreading == Spreading::short_code && m > -M)
                    raw[i] = raw[first + q];
                else
                    raw[i] = draw();
            }
        }
    }
    return ChipTable(K, N, M, std::move(raw), N);
}

std::vector<double> draw_delays(const SystemConfig& config, Rng& rng) {
    std::vector<double> tau(static_cast<std::size_t>(config.K), 0.0);
    switch (config.resolved_delay_model()) {
    case DelayModel::automatic:
    case DelayModel::zero: break;
    case DelayModel::integer_uniform: {
        std::uniform_int_distribution<int> pick(0, config.N - 1);
        for (std::size_t k = 1; k < tau.size(); ++k) tau[k] = pick(rng);
        std::sort(tau.begin() + 1, tau.end());
        break;
    }
    case DelayModel::symbol_uniform: {
        std::uniform_real_distribution<double> u(0.0, config.N);
        for (auto& t : tau) t = u(rng);
        break;
    }
    case DelayModel::chip_uniform: {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& t : tau) t = u(rng);
        break;
    }
    }
    return tau;
}

// ---------------------------------------------------------------------------

namespace {

void check_delays(const ChipTable& chips, const std::vector<double>& delays, bool integer) {
    if (delays.size() != static_cast<std::size_t>(chips.users())) bad("one delay per user is required");
    for (double t : delays) {
        if (!(t >= 0.0 && t < chips.chips())) bad("delays must lie in [0, N) chips");
        if (integer && !is_integer(t)) bad("chip-synchronous delays must be integer multiples of T_c");
    }
}

}  // namespace

CrosscorrelationMatrix build_r_cs(const ChipTable& chips, const std::vector<double>& delays) {
    check_delays(chips, delays, true);
    const int K = chips.users(), N = chips.chips(), M = chips.half_window();
    CrosscorrelationMatrix r;
    r.K = K;
    r.M = M;
    r.sync = Sync::chip_synchronous;
    r.matrix = Eigen::MatrixXd::Zero((2 * M + 1) * K, (2 * M + 1) * K);
    for (int k = 0; k < K; ++k) {
        for (int l = k; l < K; ++l) {
            for (int m = -M; m <= M; ++m) {
                for (int n = std::max(-M, m - 1); n <= std::min(M, m + 1); ++n) {
                    const long s1 = static_cast<long>(M + m) * N + static_cast<long>(delays[k]);
                    const long s2 = static_cast<long>(M + n) * N + static_cast<long>(delays[l]);
                    const long from = std::max(s1, s2), to = std::min(s1, s2) + N;
                    if (from >= to) continue;
                    double acc = 0.0;
                    for (long row = from; row < to; ++row)
                        acc += chips.raw(k, m, static_cast<int>(row - s1)) * chips.raw(l, n, static_cast<int>(row - s2));
                    const double v = acc / chips.divisor();
                    r.matrix(r.index(m, k), r.index(n, l)) = v;
                    r.matrix(r.index(n, l), r.index(m, k)) = v;
                }
            }
        }
    }
    return r;
}

Eigen::MatrixXd build_u(const ChipTable& chips, const std::vector<double>& delays) {
    check_delays(chips, delays, true);
    const int K = chips.users(), N = chips.chips(), M = chips.half_window();
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * M + 2) * N, (2 * M + 1) * K);
    for (int m = -M; m <= M; ++m)
        for (int k = 0; k < K; ++k) {
            const long offset = static_cast<long>(M + m) * N + static_cast<long>(delays[k]);
            for (int q = 0; q < N; ++q) u(offset + q, (M + m) * K + k) = chips(k, m, q);
        }
    return u;
}

CrosscorrelationMatrix build_r_ca(const ChipTable& chips, const std::vector<double>& delays,
                                  const ChipWaveform& waveform, int truncation) {
    check_delays(chips, delays, false);
    if (truncation < waveform.minimum_truncation()) {
        std::ostringstream os;
        os << "truncation " << truncation << " is below the minimum " << waveform.minimum_truncation()
           << " for waveform " << waveform.name();
        bad(os.str());
    }
    const int K = chips.users(), N = chips.chips(), M = chips.half_window();
    const int S = 2 * M + 1;
    const long T = static_cast<long>(S) * N;
    CrosscorrelationMatrix r;
    r.K = K;
    r.M = M;
    r.sync = Sync::chip_asynchronous;
    r.truncation = truncation;
    r.matrix = Eigen::MatrixXd::Zero(S * K, S * K);

    std::vector<double> block(static_cast<std::size_t>(S) * S);
    std::vector<std::pair<long, double>> taps;
    for (int k = 0; k < K; ++k) {
        const double* ck = chips.user_stream(k);
        for (int l = k; l < K; ++l) {
            const double* cl = chips.user_stream(l);
            const double d = delays[k] - delays[l];
            // chip P of user k against chip Q of user l sits at lag (P - Q) + d
            taps.clear();
            for (long j = static_cast<long>(std::ceil(-truncation - d)); j + d <= truncation; ++j) {
                const double g = waveform.autocorrelation_chips(static_cast<double>(j) + d);
                if (g != 0.0) taps.emplace_back(j, g);
            }
            std::fill(block.begin(), block.end(), 0.0);
            for (const auto& [j, g] : taps) {
                const long p0 = std::max(0L, j), p1 = std::min(T, T + j);
                for (long p = p0; p < p1; ++p) {
                    const long q = p - j;
                    block[static_cast<std::size_t>(p / N) * S + static_cast<std::size_t>(q / N)] += ck[p] * cl[q] * g;
                }
            }
            for (int a = 0; a < S; ++a)
                for (int b = 0; b < S; ++b) {
                    const double v = block[static_cast<std::size_t>(a) * S + b] / chips.divisor();
                    const int i = a * K + k, jdx = b * K + l;
                    r.matrix(i, jdx) = v;
                    r.matrix(jdx, i) = v;
                }
        }
    }
    return r;
}

CrosscorrelationMatrix build_r_cs(const SystemConfig& config, Rng& rng) {
    const auto delays = draw_delays(config, rng);
    return build_r_cs(generate_spreading(config, rng), delays);
}

CrosscorrelationMatrix build_r_ca(const SystemConfig& config, Rng& rng) {
    const auto delays = draw_delays(config, rng);
    return build_r_ca(generate_spreading(config, rng), delays, config.waveform, config.resolved_truncation());
}

CrosscorrelationMatrix build_r(const SystemConfig& config, Rng& rng) {
    return config.sync == Sync::chip_synchronous ? build_r_cs(config, rng) : build_r_ca(config, rng);
}

CrosscorrelationMatrix apply_amplitudes(const CrosscorrelationMatrix& r, const Eigen::VectorXd& amplitudes) {
    if (amplitudes.size() != r.matrix.rows()) bad("one amplitude per matrix row is required");
    CrosscorrelationMatrix out = r;
    out.matrix = amplitudes.asDiagonal() * r.matrix * amplitudes.asDiagonal();
    return out;
}

CrosscorrelationMatrix apply_fading(const CrosscorrelationMatrix& r, FadingModel fading, Rng& rng) {
    if (fading == FadingModel::unfaded) return r;
    std::exponential_distribution<double> power(1.0);
    Eigen::VectorXd a(r.matrix.rows());
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = std::sqrt(power(rng));
    return apply_amplitudes(r, a);
}

// ---------------------------------------------------------------------------

std::vector<double> empirical_moments(const Eigen::MatrixXd& r, int n_max) {
    if (n_max < 1) bad("moment order must be >= 1");
    if (r.rows() != r.cols() || r.rows() == 0) bad("empirical moments need a non-empty square matrix");
    const double p = static_cast<double>(r.rows());
    std::vector<Eigen::MatrixXd> powers{r};  // powers[i] = R^(i+1)
    const int need = (n_max + 1) / 2;
    while (static_cast<int>(powers.size()) < need) powers.push_back(powers.back() * r);
    std::vector<double> m;
    m.push_back(r.trace() / p);
    for (int n = 2; n <= n_max; ++n) {
        const int a = n / 2, b = n - a;
        // tr(A B) = sum(A o B) for symmetric A, B
        m.push_back(powers[a - 1].cwiseProduct(powers[b - 1]).sum() / p);
    }
    return m;
}

double empirical_moment(const Eigen::MatrixXd& r, int n) { return empirical_moments(r, n).back(); }

double Histogram::cdf(double x) const {
    if (eigenvalues.empty()) return 0.0;
    const auto it = std::upper_bound(eigenvalues.begin(), eigenvalues.end(), x);
    return static_cast<double>(it - eigenvalues.begin()) / static_cast<double>(eigenvalues.size());
}

Histogram empirical_esd(const Eigen::MatrixXd& r, int bins, double lo, double hi) {
    if (bins < 1) bad("bins must be >= 1");
    if (r.rows() != r.cols() || r.rows() == 0) bad("spectral distribution needs a non-empty square matrix");
    const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
    if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) bad("matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(r, Eigen::EigenvaluesOnly);
    Histogram h;
    h.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + r.rows());
    std::sort(h.eigenvalues.begin(), h.eigenvalues.end());
    if (!(hi > lo)) {
        lo = h.eigenvalues.front();
        hi = h.eigenvalues.back();
    }
    const double count = static_cast<double>(h.eigenvalues.size());
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(lo))) {
        h.left = {lo};
        h.right = {hi};
        h.mass = {1.0};
        return h;
    }
    const double width = (hi - lo) / bins;
    h.mass.assign(static_cast<std::size_t>(bins), 0.0);
    for (int b = 0; b < bins; ++b) {
        h.left.push_back(lo + b * width);
        h.right.push_back(b + 1 == bins ? hi : lo + (b + 1) * width);
    }
    // roundoff around the edges (null eigenvalues at -1e-15) stays in range
    const double slack = 1e-10 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    for (double v : h.eigenvalues) {
        if (v < lo - slack || v > hi + slack) continue;
        const int b = std::clamp(static_cast<int>((v - lo) / width), 0, bins - 1);
        h.mass[static_cast<std::size_t>(b)] += 1.0 / count;
    }
    return h;
}

// ---------------------------------------------------------------------------

std::vector<double> target_moments(const SystemConfig& config) {
    const double beta = config.beta();
    const auto power = config.fading == FadingModel::rayleigh ? PowerMomentSpec::rayleigh(config.n_max)
                                                              : PowerMomentSpec::unfaded(config.n_max);
    std::vector<double> out;
    if (config.sync == Sync::chip_synchronous) {
        for (int n = 1; n <= config.n_max; ++n) out.push_back(aem_cs_faded(n, beta, power));
    } else {
        const WMomentTable w(config.waveform, config.n_max);
        for (int n = 1; n <= config.n_max; ++n) out.push_back(aem_ca_faded(n, beta, w, power));
    }
    return out;
}

TrialReport run_trials(const SystemConfig& config) {
    config.validate(std::numeric_limits<int>::max());
    TrialReport report;
    report.config = config;

    std::vector<double> frozen;
    if (config.freeze_delays) {
        auto rng = trial_stream(config.seed, std::numeric_limits<std::uint64_t>::max());
        frozen = draw_delays(config, rng);
    }
    for (int t = 0; t < config.trials; ++t) {
        auto rng = trial_stream(config.seed, static_cast<std::uint64_t>(t));
        const auto delays = config.freeze_delays ? frozen : draw_delays(config, rng);
        const auto chips = generate_spreading(config, rng);
        auto r = config.sync == Sync::chip_synchronous
                     ? build_r_cs(chips, delays)
                     : build_r_ca(chips, delays, config.waveform, config.resolved_truncation());
        r = apply_fading(r, config.fading, rng);
        report.per_trial.push_back(empirical_moments(r.matrix, config.n_max));
    }

    const auto targets = target_moments(config);
    const double T = config.trials;
    for (int n = 1; n <= config.n_max; ++n) {
        MomentStatistic s;
        s.n = n;
        for (const auto& row : report.per_trial) s.mean += row[n - 1];
        s.mean /= T;
        if (config.trials > 1) {
            double ss = 0.0;
            for (const auto& row : report.per_trial) ss += (row[n - 1] - s.mean) * (row[n - 1] - s.mean);
            s.standard_error = std::sqrt(ss / (T - 1.0) / T);
        }
        s.target = targets[static_cast<std::size_t>(n - 1)];
        const double diff = s.mean - s.target;
        s.relative_deviation = s.target != 0.0 ? diff / s.target : diff;
        if (std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(s.target)))
            s.z_score = 0.0;
        else if (s.standard_error > 0.0)
            s.z_score = diff / s.standard_error;
        else
            s.z_score = std::copysign(std::numeric_limits<double>::infinity(), diff);
        report.moments.push_back(s);
    }
    return report;
}

}  // namespace spectra
