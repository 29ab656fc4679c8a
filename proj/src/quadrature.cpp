#include "spectra/quadrature.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace spectra {

namespace {

using Real = long double;

// Monic shifted Chebyshev polynomials on [lo, hi]:
// p_{k+1} = (x - a_k) p_k - b_k p_{k-1}.
struct ReferenceRecurrence {
    Real center, half_width;
    Real a(int) const { return center; }
    Real b(int k) const { return k == 1 ? half_width * half_width / 2 : half_width * half_width / 4; }
};

std::vector<Real> modified_moments(const std::vector<Real>& raw, const ReferenceRecurrence& ref, int count) {
    // coefficient vectors of p_k in the monomial basis
    std::vector<Real> prev, cur{1.0L};
    std::vector<Real> nu;
    for (int k = 0; k < count; ++k) {
        Real v = 0;
        for (std::size_t i = 0; i < cur.size(); ++i) v += cur[i] * raw[i];
        nu.push_back(v);
        std::vector<Real> next(cur.size() + 1, 0.0L);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            next[i + 1] += cur[i];
            next[i] -= ref.a(k) * cur[i];
        }
        if (k >= 1)
            for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= ref.b(k) * prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return nu;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

double QuadratureRule::total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

QuadratureRule gauss_rule(const MomentSequence& m, int Q, Interval support, double atom_at_zero) {
    if (Q < 1) throw std::invalid_argument("quadrature needs Q >= 1");
    if (m.size() < 2 * Q - 1) {
        std::ostringstream os;
        os << "a " << Q << "-point rule needs " << 2 * Q - 1 << " moments, " << m.size() << " given";
        throw std::invalid_argument(os.str());
    }
    if (!(support.hi > support.lo)) throw std::invalid_argument("support interval must have hi > lo");
    if (!(atom_at_zero >= 0.0 && atom_at_zero < 1.0)) throw std::invalid_argument("atom weight must lie in [0, 1)");

    const int count = 2 * Q;
    std::vector<Real> raw(static_cast<std::size_t>(count));
    raw[0] = 1.0L - atom_at_zero;
    for (int n = 1; n < count; ++n) {
        if (!std::isfinite(m[n])) throw std::domain_error("moment " + std::to_string(n) + " is not finite");
        raw[n] = m[n];
    }

    const ReferenceRecurrence ref{(static_cast<Real>(support.lo) + support.hi) / 2,
                                  (static_cast<Real>(support.hi) - support.lo) / 2};
    const auto nu = modified_moments(raw, ref, count);

    // modified Chebyshev algorithm
    std::vector<Real> alpha, beta;
    std::vector<Real> sigma_prev(static_cast<std::size_t>(count), 0.0L), sigma(nu);
    int order = 0;
    if (sigma[0] > 0) {
        alpha.push_back(ref.a(0) + sigma[1] / sigma[0]);
        beta.push_back(sigma[0]);
        order = 1;
    }
    QuadratureRule rule;
    rule.requested = Q;
    for (int k = 1; order == k && k < Q; ++k) {
        std::vector<Real> next(static_cast<std::size_t>(count), 0.0L);
        for (int l = k; l <= count - k - 1; ++l)
            next[l] = sigma[l + 1] - (alpha[k - 1] - ref.a(l)) * sigma[l] - beta[k - 1] * sigma_prev[l] +
                      ref.b(l) * sigma[l - 1];
        const Real bk = next[k] / sigma[k - 1];
        if (!(bk > 0) || !std::isfinite(static_cast<double>(bk))) break;
        alpha.push_back(ref.a(k) + next[k + 1] / next[k] - sigma[k] / sigma[k - 1]);
        beta.push_back(bk);
        sigma_prev = std::move(sigma);
        sigma = std::move(next);
        order = k + 1;
    }
    if (order == 0) throw std::domain_error("moment sequence is not positive: no quadrature rule exists");

    // shrink further if nodes leave the support from below
    const double tolerance = 1e-9 * (support.hi - support.lo);
    for (int q = order; q >= 1; --q) {
        Eigen::VectorXd diag(q), sub(std::max(q - 1, 0));
        for (int i = 0; i < q; ++i) diag[i] = static_cast<double>(alpha[i]);
        for (int i = 1; i < q; ++i) sub[i - 1] = std::sqrt(static_cast<double>(beta[i]));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        const auto& x = solver.eigenvalues();
        if (q > 1 && x.minCoeff() < support.lo - tolerance) continue;
        rule.nodes.clear();
        rule.weights.clear();
        if (atom_at_zero > 0.0) {
            rule.nodes.push_back(0.0);
            rule.weights.push_back(atom_at_zero);
        }
        for (int i = 0; i < q; ++i) {
            const double v = solver.eigenvectors()(0, i);
            rule.nodes.push_back(x[i]);
            rule.weights.push_back(static_cast<double>(beta[0]) * v * v);
        }
        if (q < Q) {
            rule.breakdown_order = q;
            std::ostringstream os;
            os << "moment problem lost positive definiteness at order " << q << "; returning a " << q
               << "-point rule instead of " << Q;
            rule.warning = os.str();
        }
        return rule;
    }
    throw std::domain_error("no quadrature rule inside the support");
}

Interval heuristic_support(const MomentSequence& m) {
    if (m.size() < 2) throw std::invalid_argument("heuristic support needs two moments");
    const double sd = std::sqrt(std::max(0.0, m[2] - m[1] * m[1]));
    const double hi = m[1] + 10.0 * sd;
    return {0.0, hi > 0.0 ? hi : 1.0};
}

bool SpectralLaw::is_marchenko_pastur() const {
    if (fading != FadingModel::unfaded) return false;
    return waveform.family() == ChipWaveform::Family::sinc ||
           (waveform.family() == ChipWaveform::Family::srrc && waveform.alpha() == 0.0);
}

MomentSequence SpectralLaw::moments(int n_max) const {
    if (is_marchenko_pastur()) return mp_moments(n_max, beta);
    const WMomentTable w(waveform, n_max);
    const auto power = fading == FadingModel::rayleigh ? PowerMomentSpec::rayleigh(n_max)
                                                       : PowerMomentSpec::unfaded(n_max);
    return aem_ca_faded_table(n_max, beta, w, power);
}

QuadratureRule spectral_rule(const SpectralLaw& law, int Q) {
    if (!(law.beta >= 0.0) || !std::isfinite(law.beta)) throw std::invalid_argument("beta must be non-negative");
    if (Q <= 0) Q = law.fading == FadingModel::unfaded ? 10 : 15;
    if (law.is_marchenko_pastur()) {
        if (law.beta == 0.0) return {{1.0}, {1.0}, Q, 0, {}};
        const auto [a, b] = mp_support(law.beta);
        return gauss_rule(mp_moments(2 * Q, law.beta), Q, {a, b}, mp_atom(law.beta));
    }
    const auto m = law.moments(2 * Q);
    return gauss_rule(m, Q, heuristic_support(m));
}

double expectation(const QuadratureRule& rule, const std::function<double(double)>& g) {
    double total = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
        const double v = g(rule.nodes[i]);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "integrand is not finite at node " << rule.nodes[i];
            throw std::domain_error(os.str());
        }
        total += rule.weights[i] * v;
    }
    return total;
}

double spectral_efficiency_opt(const QuadratureRule& rule, double alpha, double beta, double snr) {
    require_positive(snr, "snr");
    return beta / (1.0 + alpha) * expectation(rule, [snr](double x) { return std::log2(1.0 + snr * x); });
}

double spectral_efficiency_mmse_lb(const QuadratureRule& rule, double alpha, double beta, double snr) {
    require_positive(snr, "snr");
    return -beta / (1.0 + alpha) * std::log2(mmse_value(rule, snr));
}

double mmse_value(const QuadratureRule& rule, double snr) {
    if (!(snr >= 0.0)) throw std::invalid_argument("snr must be non-negative");
    return expectation(rule, [snr](double x) { return 1.0 / (1.0 + snr * x); });
}

double closed_form_F(double x, double z) {
    const double r = std::sqrt(z);
    const double d = std::sqrt(x * (1.0 + r) * (1.0 + r) + 1.0) - std::sqrt(x * (1.0 - r) * (1.0 - r) + 1.0);
    return d * d;
}

double closed_form_opt(double beta, double snr) {
    require_positive(beta, "beta");
    require_positive(snr, "snr");
    const double f = closed_form_F(snr, beta);
    return beta * std::log2(1.0 + snr - f / 4.0) + std::log2(1.0 + snr * beta - f / 4.0) -
           std::log2(std::exp(1.0)) * f / (4.0 * snr);
}

double closed_form_mmse_eff(double beta, double snr) {
    require_positive(beta, "beta");
    require_positive(snr, "snr");
    return beta * std::log2(1.0 + snr - closed_form_F(snr, beta) / 4.0);
}

double closed_form_mmse(double beta, double snr) {
    require_positive(beta, "beta");
    require_positive(snr, "snr");
    return 1.0 - closed_form_F(snr, beta) / (4.0 * beta * snr);
}

double ebn0_of_snr(double beta, double alpha, double snr, double efficiency) {
    require_positive(efficiency, "spectral efficiency");
    return beta * snr / ((1.0 + alpha) * efficiency);
}

double snr_of_ebn0(double beta, double alpha, double ebn0, const std::function<double(double)>& efficiency) {
    require_positive(beta, "beta");
    require_positive(ebn0, "Eb/N0");
    auto gap = [&](double snr_db) {
        const double snr = db_to_linear(snr_db);
        return std::log(ebn0_of_snr(beta, alpha, snr, efficiency(snr))) - std::log(ebn0);
    };
    double lo = -30.0, hi = 60.0;
    double g_lo = gap(lo);
    if (g_lo * gap(hi) > 0.0) {
        std::ostringstream os;
        os << "Eb/N0 = " << linear_to_db(ebn0) << " dB is not reachable for snr in [-30, 60] dB";
        throw std::domain_error(os.str());
    }
    // 1e-6 relative in snr is about 4.3e-6 dB
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        const double g = gap(mid);
        if ((g <= 0.0) == (g_lo <= 0.0)) {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    return db_to_linear(0.5 * (lo + hi));
}

}  // namespace spectra
