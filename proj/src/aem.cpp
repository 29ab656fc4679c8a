#include "spectra/aem.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spectra {

namespace {

using Real = long double;

const std::vector<ClassSizeProfile>& cached_profiles(int n, int parts) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::vector<ClassSizeProfile>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find({n, parts});
    if (it == cache.end()) it = cache.emplace(std::pair{n, parts}, profiles(n, parts)).first;
    return it->second;
}

template <class G>
Real product_over(const ClassSizeProfile& p, G&& g) {
    Real r = 1;
    for (int s : p.sizes()) r *= static_cast<Real>(g(s));
    return r;
}

void require_length(int have, int need, const char* what) {
    if (have < need) {
        std::ostringstream os;
        os << what << " provides " << have << " values but " << need << " are required";
        throw std::invalid_argument(os.str());
    }
}

void require_order(int n) {
    if (n < 1) throw std::invalid_argument("moment order must be >= 1");
}

// sum_j weight(j) sum_{profiles with `parts(j)` parts} count_by_profile * prod g(size)
template <class Weight, class Parts, class G>
Real profile_sum(int n, Weight&& weight, Parts&& parts, G&& g) {
    Real total = 0;
    for (int j = 1; j <= n; ++j) {
        Real inner = 0;
        for (const auto& p : cached_profiles(n, parts(j)))
            inner += static_cast<Real>(count_by_profile(p)) * product_over(p, g);
        total += static_cast<Real>(weight(j)) * inner;
    }
    return total;
}

// sum_j weight(j) sum_{pi: j parts} sum_{kc: n-j+1 parts} pairs * prod g_pi * prod g_kc
template <class Weight, class GPi, class GKc>
Real pair_sum(int n, Weight&& weight, GPi&& g_pi, GKc&& g_kc) {
    Real total = 0;
    for (int j = 1; j <= n; ++j) {
        const auto& kcs = cached_profiles(n, n - j + 1);
        std::vector<Real> kc_products;
        kc_products.reserve(kcs.size());
        for (const auto& kc : kcs) kc_products.push_back(product_over(kc, g_kc));
        Real inner = 0;
        for (const auto& pi : cached_profiles(n, j)) {
            Real over_kc = 0;
            for (std::size_t t = 0; t < kcs.size(); ++t)
                over_kc += static_cast<Real>(count_by_profile_pair(pi, kcs[t])) * kc_products[t];
            inner += product_over(pi, g_pi) * over_kc;
        }
        total += static_cast<Real>(weight(j)) * inner;
    }
    return total;
}

Real power(double base, int exponent) {
    Real r = 1;
    for (int i = 0; i < exponent; ++i) r *= base;
    return r;
}

void require_beta(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be a non-negative real");
}

}  // namespace

// ---------------------------------------------------------------------------

MomentSequence::MomentSequence(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {}

double MomentSequence::operator[](int n) const {
    if (n == 0) return 1.0;
    if (n < 0 || n > size()) throw std::out_of_range("moment index out of range");
    return values_[static_cast<std::size_t>(n - 1)];
}

MomentSequence MomentSequence::prefix(int n) const {
    require_length(size(), n, "moment sequence");
    return MomentSequence({values_.begin(), values_.begin() + n}, label_);
}

MomentSequence MomentSequence::point_mass(double at, int n_max) {
    std::vector<double> v;
    double x = 1.0;
    for (int n = 1; n <= n_max; ++n) v.push_back(x *= at);
    std::ostringstream os;
    os << "point-mass(" << at << ")";
    return MomentSequence(std::move(v), os.str());
}

FreeCumulantSequence::FreeCumulantSequence(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {}

double FreeCumulantSequence::operator[](int n) const {
    if (n < 1 || n > size()) throw std::out_of_range("cumulant index out of range");
    return values_[static_cast<std::size_t>(n - 1)];
}

PowerMomentSpec::PowerMomentSpec(Model model, std::vector<double> values)
    : model_(model), values_(std::move(values)) {
    for (double v : values_)
        if (!(v >= 0.0)) throw std::invalid_argument("power moments must be non-negative");
}

PowerMomentSpec PowerMomentSpec::unfaded(int n_max, double mean_power) {
    std::vector<double> v;
    for (int n = 1; n <= n_max; ++n) v.push_back(std::pow(mean_power, n));
    return {Model::unfaded, std::move(v)};
}

PowerMomentSpec PowerMomentSpec::rayleigh(int n_max, double mean_power) {
    std::vector<double> v;
    double fact = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        fact *= n;
        v.push_back(fact * std::pow(mean_power, n));
    }
    return {Model::rayleigh, std::move(v)};
}

PowerMomentSpec PowerMomentSpec::custom(std::vector<double> values) { return {Model::custom, std::move(values)}; }

PowerMomentSpec PowerMomentSpec::parse(const std::string& model, int n_max) {
    if (model == "unfaded" || model == "none") return unfaded(n_max);
    if (model == "rayleigh") return rayleigh(n_max);
    throw std::invalid_argument("unknown fading model '" + model + "' (expected unfaded or rayleigh)");
}

std::string PowerMomentSpec::name() const {
    switch (model_) {
    case Model::unfaded: return "unfaded";
    case Model::rayleigh: return "rayleigh";
    case Model::custom: return "custom";
    }
    return "?";
}

double PowerMomentSpec::operator[](int n) const {
    if (n < 1 || n > size()) throw std::out_of_range("power moment index out of range");
    return values_[static_cast<std::size_t>(n - 1)];
}

MomentSequence PowerMomentSpec::as_moments() const { return MomentSequence(values_, "power:" + name()); }

// ---------------------------------------------------------------------------

double mp_moment(int n, double beta) {
    require_order(n);
    require_beta(beta);
    Real total = 0;
    for (int j = 1; j <= n; ++j) total += static_cast<Real>(narayana(n, j)) * power(beta, j - 1);
    return static_cast<double>(total);
}

MomentSequence mp_moments(int n_max, double beta) {
    std::vector<double> v;
    for (int n = 1; n <= n_max; ++n) v.push_back(mp_moment(n, beta));
    std::ostringstream os;
    os << "marchenko-pastur(beta=" << beta << ")";
    return MomentSequence(std::move(v), os.str());
}

double mp_density(double x, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("mp_density requires beta > 0");
    if (x <= 0.0) return 0.0;
    const auto [a, b] = mp_support(beta);
    const double v = std::max(0.0, x - a) * std::max(0.0, b - x);
    return std::sqrt(v) / (2.0 * std::numbers::pi * beta * x);
}

double mp_atom(double beta) { return beta > 1.0 ? 1.0 - 1.0 / beta : 0.0; }

std::pair<double, double> mp_support(double beta) {
    const double r = std::sqrt(beta);
    return {(1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r)};
}

double aem_cs_faded(int n, double beta, const PowerMomentSpec& power_spec) {
    require_order(n);
    require_beta(beta);
    require_length(power_spec.size(), n, "power moment table");
    return static_cast<double>(profile_sum(
        n, [&](int j) { return power(beta, j - 1); }, [](int j) { return j; },
        [&](int size) { return power_spec[size]; }));
}

double quadratic_form_moments(int n, double beta, const MomentSequence& s) {
    require_order(n);
    require_beta(beta);
    require_length(s.size(), n, "moment sequence of S");
    return static_cast<double>(profile_sum(
        n, [&](int j) { return power(beta, j - 1); }, [n](int j) { return n - j + 1; },
        [&](int size) { return s[size]; }));
}

double aem_ca(int n, double beta, const WMomentTable& w) {
    require_length(w.size(), n, "W table");
    return quadratic_form_moments(n, beta, MomentSequence(w.values()));
}

double aem_ca_faded(int n, double beta, const WMomentTable& w, const PowerMomentSpec& power_spec) {
    require_order(n);
    require_beta(beta);
    require_length(w.size(), n, "W table");
    require_length(power_spec.size(), n, "power moment table");
    return static_cast<double>(pair_sum(
        n, [&](int j) { return power(beta, j - 1); }, [&](int size) { return power_spec[size]; },
        [&](int size) { return w[size]; }));
}

namespace {

template <class F>
MomentSequence tabulate(int n_max, F&& f, std::string label) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) v.push_back(f(n));
    return MomentSequence(std::move(v), std::move(label));
}

std::string describe(const char* kind, double beta, const std::string& extra) {
    std::ostringstream os;
    os << kind << "(beta=" << beta;
    if (!extra.empty()) os << ", " << extra;
    os << ")";
    return os.str();
}

}  // namespace

MomentSequence aem_cs_faded_table(int n_max, double beta, const PowerMomentSpec& power_spec) {
    return tabulate(n_max, [&](int n) { return aem_cs_faded(n, beta, power_spec); },
                    describe("cs-faded", beta, "fading=" + power_spec.name()));
}

MomentSequence aem_ca_table(int n_max, double beta, const WMomentTable& w) {
    return tabulate(n_max, [&](int n) { return aem_ca(n, beta, w); }, describe("ca", beta, "waveform=" + w.label()));
}

MomentSequence aem_ca_faded_table(int n_max, double beta, const WMomentTable& w, const PowerMomentSpec& power_spec) {
    return tabulate(n_max, [&](int n) { return aem_ca_faded(n, beta, w, power_spec); },
                    describe("ca-faded", beta, "waveform=" + w.label() + ", fading=" + power_spec.name()));
}

// ---------------------------------------------------------------------------

Count s_coefficient(int k) {
    if (k < 1) throw std::invalid_argument("s_coefficient requires k >= 1");
    const Count c = catalan(k - 1);
    return k % 2 == 1 ? c : -c;
}

MomentSequence moments_from_cumulants(const FreeCumulantSequence& c, int n_max) {
    require_length(c.size(), n_max, "cumulant sequence");
    return tabulate(
        n_max,
        [&](int n) {
            return static_cast<double>(
                profile_sum(n, [](int) { return 1; }, [](int j) { return j; }, [&](int size) { return c[size]; }));
        },
        c.label().empty() ? "moments" : "moments(" + c.label() + ")");
}

FreeCumulantSequence cumulants_from_moments(const MomentSequence& m, int n_max) {
    require_length(m.size(), n_max, "moment sequence");
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    std::vector<double> out;
    for (int n = 1; n <= n_max; ++n) {
        Real total = 0;
        for (int j = 1; j <= n; ++j) {
            const auto& kcs = cached_profiles(n, n - j + 1);
            for (const auto& pi : cached_profiles(n, j)) {
                // integer coefficient collected exactly before touching floats
                Count coefficient = 0;
                for (const auto& kc : kcs) {
                    Count term = count_by_profile_pair(pi, kc);
                    for (int s : kc.sizes()) term = checked_mul(term, s_coefficient(s));
                    coefficient = checked_add(coefficient, term);
                }
                if (coefficient != 0)
                    total += static_cast<Real>(coefficient) * product_over(pi, [&](int size) { return m[size]; });
            }
        }
        out.push_back(static_cast<double>(total));
    }
    return FreeCumulantSequence(std::move(out), m.label().empty() ? "cumulants" : "cumulants(" + m.label() + ")");
}

MomentSequence free_add(const MomentSequence& b, const MomentSequence& c, int n_max) {
    const auto cb = cumulants_from_moments(b, n_max);
    const auto cc = cumulants_from_moments(c, n_max);
    std::vector<double> sum(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) sum[n - 1] = cb[n] + cc[n];
    auto out = moments_from_cumulants(FreeCumulantSequence(std::move(sum)), n_max);
    out.set_label("free-sum(" + b.label() + ", " + c.label() + ")");
    return out;
}

MomentSequence free_multiply(const FreeCumulantSequence& b_cumulants, const MomentSequence& c, int n_max) {
    require_length(b_cumulants.size(), n_max, "cumulant sequence of B");
    require_length(c.size(), n_max, "moment sequence of C");
    return tabulate(
        n_max,
        [&](int n) {
            return static_cast<double>(pair_sum(
                n, [](int) { return 1; }, [&](int size) { return b_cumulants[size]; },
                [&](int size) { return c[size]; }));
        },
        "free-product(" + b_cumulants.label() + ", " + c.label() + ")");
}

FreeCumulantSequence cs_cumulants(int n_max, double beta) {
    require_beta(beta);
    std::vector<double> v;
    for (int n = 1; n <= n_max; ++n) v.push_back(static_cast<double>(power(beta, n - 1)));
    return FreeCumulantSequence(std::move(v), describe("cs-cumulants", beta, ""));
}

FreeCumulantSequence ca_cumulants(int n_max, double beta, const WMomentTable& w) {
    require_beta(beta);
    require_length(w.size(), n_max, "W table");
    std::vector<double> v;
    for (int n = 1; n <= n_max; ++n) v.push_back(w[n] * static_cast<double>(power(beta, n - 1)));
    return FreeCumulantSequence(std::move(v), describe("ca-cumulants", beta, "waveform=" + w.label()));
}

}  // namespace spectra
