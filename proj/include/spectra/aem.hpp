#pragma once

#include <string>
#include <vector>

#include "spectra/nc_partitions.hpp"
#include "spectra/waveform.hpp"

namespace spectra {

/// Moments m_1..m_nmax of a law on the real line; m_0 = 1 is implicit.
class MomentSequence {
public:
    MomentSequence() = default;
    explicit MomentSequence(std::vector<double> values, std::string label = {});

    int size() const { return static_cast<int>(values_.size()); }
    /// m_n for 0 <= n <= size(); m_0 = 1.
    double operator[](int n) const;
    const std::vector<double>& values() const { return values_; }
    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    /// The first n moments.
    MomentSequence prefix(int n) const;

    static MomentSequence point_mass(double at, int n_max);

private:
    std::vector<double> values_;
    std::string label_;
};

/// Free cumulants c_1..c_nmax.
class FreeCumulantSequence {
public:
    FreeCumulantSequence() = default;
    explicit FreeCumulantSequence(std::vector<double> values, std::string label = {});

    int size() const { return static_cast<int>(values_.size()); }
    /// 1-based.
    double operator[](int n) const;
    const std::vector<double>& values() const { return values_; }
    const std::string& label() const { return label_; }

private:
    std::vector<double> values_;
    std::string label_;
};

/// Moments P^(1..n) of the squared received amplitude |A|^2.
class PowerMomentSpec {
public:
    enum class Model { unfaded, rayleigh, custom };

    /// P^(n) = mean_power^n.
    static PowerMomentSpec unfaded(int n_max, double mean_power = 1.0);
    /// |A|^2 exponential: P^(n) = n! mean_power^n.
    static PowerMomentSpec rayleigh(int n_max, double mean_power = 1.0);
    static PowerMomentSpec custom(std::vector<double> values);
    /// "unfaded" or "rayleigh".
    static PowerMomentSpec parse(const std::string& model, int n_max);

    Model model() const { return model_; }
    std::string name() const;
    int size() const { return static_cast<int>(values_.size()); }
    /// 1-based.
    double operator[](int n) const;
    const std::vector<double>& values() const { return values_; }

    MomentSequence as_moments() const;

private:
    PowerMomentSpec(Model model, std::vector<double> values);
    Model model_;
    std::vector<double> values_;
};

// Marchenko-Pastur reference law ------------------------------------------------

double mp_moment(int n, double beta);
MomentSequence mp_moments(int n_max, double beta);
/// Continuous part of the Marchenko-Pastur density.
double mp_density(double x, double beta);
/// Weight (1 - 1/beta)^+ of the atom at zero.
double mp_atom(double beta);
/// Support [(1 - sqrt(beta))^2, (1 + sqrt(beta))^2] of the continuous part.
std::pair<double, double> mp_support(double beta);

// Closed-form asymptotic eigenvalue moments -------------------------------------

double aem_cs_faded(int n, double beta, const PowerMomentSpec& power);
double aem_ca(int n, double beta, const WMomentTable& w);
double aem_ca_faded(int n, double beta, const WMomentTable& w, const PowerMomentSpec& power);
/// Moments of C^T S C for a spreading matrix C at load beta and a symmetric
/// S with the given moment sequence.
double quadratic_form_moments(int n, double beta, const MomentSequence& s);

MomentSequence aem_cs_faded_table(int n_max, double beta, const PowerMomentSpec& power);
MomentSequence aem_ca_table(int n_max, double beta, const WMomentTable& w);
MomentSequence aem_ca_faded_table(int n_max, double beta, const WMomentTable& w, const PowerMomentSpec& power);

// Free probability transforms ---------------------------------------------------

/// (-1)^{k-1} Catalan(k-1).
Count s_coefficient(int k);

MomentSequence moments_from_cumulants(const FreeCumulantSequence& c, int n_max);
FreeCumulantSequence cumulants_from_moments(const MomentSequence& m, int n_max);

/// Moments of the free additive convolution.
MomentSequence free_add(const MomentSequence& b, const MomentSequence& c, int n_max);
/// Moments of B C for B, C asymptotically free, given B's free cumulants and
/// C's moments.
MomentSequence free_multiply(const FreeCumulantSequence& b_cumulants, const MomentSequence& c, int n_max);

/// Free cumulants beta^{n-1} of the chip-synchronous crosscorrelation matrix.
FreeCumulantSequence cs_cumulants(int n_max, double beta);
/// Free cumulants W^(n) beta^{n-1} of the chip-asynchronous matrix.
FreeCumulantSequence ca_cumulants(int n_max, double beta, const WMomentTable& w);

}  // namespace spectra
