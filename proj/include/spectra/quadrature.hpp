#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "spectra/aem.hpp"
#include "spectra/simulator.hpp"
#include "spectra/waveform.hpp"

namespace spectra {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    /// Points requested; size() may be smaller after a breakdown (plus one
    /// for a split-off atom).
    int requested = 0;
    /// Order q at which positive definiteness was lost, 0 if none.
    int breakdown_order = 0;
    std::string warning;

    int size() const { return static_cast<int>(nodes.size()); }
    double total_weight() const;
};

/// Q-point Gauss rule from moments m_1..m_{2Q-1} by the modified Chebyshev
/// algorithm against shifted Chebyshev polynomials on `support`. A positive
/// `atom_at_zero` weight is split out as an extra node at 0 before the
/// continuous part is fitted. Throws std::invalid_argument if the sequence is
/// too short and std::domain_error on non-finite moments.
QuadratureRule gauss_rule(const MomentSequence& m, int Q, Interval support, double atom_at_zero = 0.0);

/// [0, m_1 + 10 sd] for laws without a known support.
Interval heuristic_support(const MomentSequence& m);

/// Limiting spectral law of A^T R A: load beta, chip waveform and fading.
struct SpectralLaw {
    double beta = 1.0;
    ChipWaveform waveform = ChipWaveform::sinc();
    FadingModel fading = FadingModel::unfaded;

    /// Marchenko-Pastur: unfaded with W == 1.
    bool is_marchenko_pastur() const;
    MomentSequence moments(int n_max) const;
};

/// Rule for a spectral law; MP laws use their support and split the atom at 0.
/// Q = 0 picks 10 points unfaded and 15 faded.
QuadratureRule spectral_rule(const SpectralLaw& law, int Q = 0);

/// Throws std::domain_error when g is not finite at a node.
double expectation(const QuadratureRule& rule, const std::function<double(double)>& g);

double spectral_efficiency_opt(const QuadratureRule& rule, double alpha, double beta, double snr);
double spectral_efficiency_mmse_lb(const QuadratureRule& rule, double alpha, double beta, double snr);
double mmse_value(const QuadratureRule& rule, double snr);

// Closed forms for alpha = 0.
double closed_form_F(double x, double z);
double closed_form_opt(double beta, double snr);
double closed_form_mmse_eff(double beta, double snr);
double closed_form_mmse(double beta, double snr);

double ebn0_of_snr(double beta, double alpha, double snr, double efficiency);
/// Solves ebn0_of_snr(beta, alpha, snr, efficiency(snr)) = ebn0 by bisection on
/// log snr over [-30, 60] dB. Throws std::domain_error if not bracketed.
double snr_of_ebn0(double beta, double alpha, double ebn0, const std::function<double(double)>& efficiency);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace spectra
