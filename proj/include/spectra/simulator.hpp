#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectra/aem.hpp"
#include "spectra/waveform.hpp"

namespace spectra {

enum class Spreading { short_code, long_code };
enum class ChipLaw { binary, gaussian };
enum class Sync { chip_synchronous, chip_asynchronous };
/// automatic: sorted integer delays when chip-synchronous, uniform on
/// [0, N T_c) otherwise.
enum class DelayModel { automatic, zero, integer_uniform, symbol_uniform, chip_uniform };
enum class FadingModel { unfaded, rayleigh };

std::string to_string(Spreading);
std::string to_string(ChipLaw);
std::string to_string(Sync);
std::string to_string(DelayModel);
std::string to_string(FadingModel);
Spreading parse_spreading(const std::string&);
ChipLaw parse_chip_law(const std::string&);
Sync parse_sync(const std::string&);
DelayModel parse_delay_model(const std::string&);
FadingModel parse_fading(const std::string&);

struct SystemConfig {
    int K = 60;
    int N = 120;
    int M = 8;
    Spreading spreading = Spreading::short_code;
    ChipLaw chip_law = ChipLaw::binary;
    Sync sync = Sync::chip_synchronous;
    DelayModel delay_model = DelayModel::automatic;
    ChipWaveform waveform = ChipWaveform::sinc();
    FadingModel fading = FadingModel::unfaded;
    std::uint64_t seed = 1;
    int trials = 20;
    /// R_psi truncation in chips; 0 selects the waveform default.
    int truncation = 0;
    /// Draw delays once (from the master seed) instead of once per trial.
    bool freeze_delays = false;
    /// Highest moment order reported by run_trials.
    int n_max = 4;

    double beta() const { return static_cast<double>(K) / N; }
    int dimension() const { return (2 * M + 1) * K; }
    DelayModel resolved_delay_model() const;
    int resolved_truncation() const;
    /// Throws std::invalid_argument on inconsistent or oversized input.
    void validate(int max_dimension = 4000) const;
};

using Rng = std::mt19937_64;

/// Substream for one trial; depends only on (seed, index).
Rng trial_stream(std::uint64_t seed, std::uint64_t index);

/// Chips c_k^(q)(m) = raw / sqrt(divisor). Products are accumulated on the raw
/// values and divided by `divisor` once, which keeps binary diagonals exact.
class ChipTable {
public:
    ChipTable(int K, int N, int M, std::vector<double> raw, double divisor);

    int users() const { return K_; }
    int chips() const { return N_; }
    int half_window() const { return M_; }
    double divisor() const { return divisor_; }
    /// m in [-M, M], q in [0, N).
    double raw(int k, int m, int q) const { return raw_[index(k, m, q)]; }
    double operator()(int k, int m, int q) const;
    /// Raw chips of user k over all symbols, symbol -M first.
    const double* user_stream(int k) const { return raw_.data() + index(k, -M_, 0); }

private:
    std::size_t index(int k, int m, int q) const {
        return (static_cast<std::size_t>(k) * (2 * M_ + 1) + static_cast<std::size_t>(m + M_)) * N_ + q;
    }
    int K_, N_, M_;
    std::vector<double> raw_;
    double divisor_;
};

ChipTable generate_spreading(const SystemConfig& config, Rng& rng);
/// Delays tau_k in chips.
std::vector<double> draw_delays(const SystemConfig& config, Rng& rng);

/// Dense symmetric matrix indexed by (M + m) K + k.
struct CrosscorrelationMatrix {
    Eigen::MatrixXd matrix;
    int K = 0;
    int M = 0;
    Sync sync = Sync::chip_synchronous;
    /// Chips of R_psi kept on either side of zero; 0 for chip-synchronous builds.
    int truncation = 0;

    int dimension() const { return static_cast<int>(matrix.rows()); }
    int index(int m, int k) const { return (M + m) * K + k; }
};

CrosscorrelationMatrix build_r_cs(const ChipTable& chips, const std::vector<double>& delays);
/// (2M+2)N x (2M+1)K; column (m, k) holds user k's symbol-m chips from row (M+m)N + tau_k.
Eigen::MatrixXd build_u(const ChipTable& chips, const std::vector<double>& delays);
CrosscorrelationMatrix build_r_ca(const ChipTable& chips, const std::vector<double>& delays,
                                  const ChipWaveform& waveform, int truncation);

CrosscorrelationMatrix build_r_cs(const SystemConfig& config, Rng& rng);
CrosscorrelationMatrix build_r_ca(const SystemConfig& config, Rng& rng);
/// Dispatches on config.sync.
CrosscorrelationMatrix build_r(const SystemConfig& config, Rng& rng);

/// A^T R A for diagonal A with the given amplitudes (one per row of R).
CrosscorrelationMatrix apply_amplitudes(const CrosscorrelationMatrix& r, const Eigen::VectorXd& amplitudes);
/// Unfaded returns the input; Rayleigh draws |A|^2 ~ Exp(1) per (user, symbol).
CrosscorrelationMatrix apply_fading(const CrosscorrelationMatrix& r, FadingModel fading, Rng& rng);

double empirical_moment(const Eigen::MatrixXd& r, int n);
/// m_1..m_nmax with ceil(n_max / 2) - 1 matrix products.
std::vector<double> empirical_moments(const Eigen::MatrixXd& r, int n_max);

struct Histogram {
    std::vector<double> left, right, mass;
    std::vector<double> eigenvalues;  // ascending

    /// Empirical CDF at x.
    double cdf(double x) const;
};

/// Eigenvalues binned uniformly over [lo, hi]; lo == hi picks the eigenvalue range.
Histogram empirical_esd(const Eigen::MatrixXd& r, int bins, double lo = 0.0, double hi = 0.0);

struct MomentStatistic {
    int n = 0;
    double mean = 0.0;
    double standard_error = 0.0;
    double target = 0.0;
    double relative_deviation = 0.0;
    double z_score = 0.0;
};

struct TrialReport {
    SystemConfig config;
    std::vector<MomentStatistic> moments;
    std::vector<std::vector<double>> per_trial;  // [trial][n-1]
};

/// Analytic AEM targets for the configured system.
std::vector<double> target_moments(const SystemConfig& config);

TrialReport run_trials(const SystemConfig& config);

}  // namespace spectra
