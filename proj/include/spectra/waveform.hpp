#pragma once

#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace spectra {

/// Sampled spectral energy density |Psi(Omega)|^2 in chip units (T_c = 1),
/// linearly interpolated between samples and zero outside them.
struct SampledSpectrum {
    std::vector<double> omega;    // rad per chip, strictly increasing
    std::vector<double> density;  // non-negative

    double operator()(double w) const;
};

/// Unit-energy chip pulse satisfying the zero-ICI condition.
class ChipWaveform {
public:
    enum class Family { sinc, srrc, custom };

    static ChipWaveform sinc(double chip_duration = 1.0);
    static ChipWaveform srrc(double alpha, double chip_duration = 1.0);
    /// Throws if the density does not carry unit energy within 1e-9.
    static ChipWaveform custom(SampledSpectrum spectrum, double chip_duration = 1.0);

    /// "sinc" or "srrc:<alpha>".
    static ChipWaveform parse(const std::string& name);
    /// Two-column CSV (omega, density), optional header line.
    static ChipWaveform load_csv(const std::string& path, double chip_duration = 1.0);

    Family family() const { return family_; }
    double alpha() const { return alpha_; }
    double chip_duration() const { return chip_duration_; }
    /// Single-sided bandwidth in hertz.
    double bandwidth() const;
    /// 2 BW T_c: the measure of the normalized spectral support.
    double support_measure() const { return 2.0 * bandwidth() * chip_duration_; }

    std::string name() const;

    /// |Psi|^2 / T_c as a function of normalized frequency u = f T_c.
    double normalized_density(double u) const;
    /// Increasing breakpoints of the normalized density; the first and last
    /// entries bound its support.
    std::vector<double> density_breakpoints() const;

    /// R_psi(x) for x in seconds.
    double autocorrelation(double x) const;
    /// R_psi at x chips; exact zero at nonzero integer lags.
    double autocorrelation_chips(double x) const;

    /// Smallest truncation (chips) for which the dropped autocorrelation tail
    /// stays below 1e-2 in magnitude.
    int minimum_truncation() const;
    /// 30 chips for SRRC with alpha >= 0.22, 200 otherwise.
    int default_truncation() const;

private:
    ChipWaveform(Family family, double alpha, double chip_duration,
                 std::shared_ptr<const SampledSpectrum> spectrum);

    Family family_;
    double alpha_;
    double chip_duration_;
    std::shared_ptr<const SampledSpectrum> spectrum_;
};

/// W_psi^(1..n_max).
class WMomentTable {
public:
    WMomentTable(const ChipWaveform& waveform, int n_max);
    /// Table of given values (used by tests and generic quadratic forms).
    explicit WMomentTable(std::vector<double> values, std::string label = "custom");

    int size() const { return static_cast<int>(values_.size()); }
    /// 1-based.
    double operator[](int m) const;
    const std::vector<double>& values() const { return values_; }
    const std::string& label() const { return label_; }

private:
    std::vector<double> values_;
    std::string label_;
};

/// Spectral moment W_psi^(m) by adaptive quadrature over the density's
/// segments (relative tolerance 1e-8). Sinc returns exactly 1.
double w_moment(const ChipWaveform& w, int m);

/// Truncated lattice sum over (n_1..n_{m-1}) in [-L, L]^{m-1} of the cyclic
/// product R((n_0-n_1)+eta_0-eta_1) ... R((n_{m-1}-n_0)+eta_{m-1}-eta_0).
/// `etas` are in seconds.
double xi_lattice_sum(const ChipWaveform& w, int m, const std::vector<double>& etas, int n0, int truncation);

struct MonteCarloEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    int draws = 0;
};

/// Expectation of the lattice sum with eta_0 = 0 and eta_1..eta_{m-1} drawn
/// i.i.d. uniform on [0, T_c).
MonteCarloEstimate xi_lattice_expectation(const ChipWaveform& w, int m, int n0, int truncation, int draws,
                                          std::uint64_t seed);

}  // namespace spectra
