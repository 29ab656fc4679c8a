#include "spectra/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace spectra {

namespace {

constexpr double pi = std::numbers::pi;

double sinc_fn(double x) {
    if (x == 0.0) return 1.0;
    const double px = pi * x;
    return std::sin(px) / px;
}

// cos(pi alpha x) / (1 - (2 alpha x)^2), continuous across |x| = 1/(2 alpha).
double raised_cosine_taper(double alpha, double x) {
    const double y = 2.0 * alpha * std::abs(x);
    const double e = y - 1.0;
    if (std::abs(e) < 1e-3) {
        if (e == 0.0) return pi / 4.0;
        return std::sin(pi * e / 2.0) / (e * (2.0 + e));
    }
    return std::cos(pi * y / 2.0) / (1.0 - y * y);
}

template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10) {
    if (b <= a) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol);
}

bool is_nonzero_integer(double x) { return x != 0.0 && x == std::round(x); }

}  // namespace

double SampledSpectrum::operator()(double w) const {
    if (omega.empty() || w < omega.front() || w > omega.back()) return 0.0;
    auto it = std::upper_bound(omega.begin(), omega.end(), w);
    if (it == omega.end()) return density.back();
    const std::size_t i = static_cast<std::size_t>(it - omega.begin());
    const double t = (w - omega[i - 1]) / (omega[i] - omega[i - 1]);
    return density[i - 1] + t * (density[i] - density[i - 1]);
}

ChipWaveform::ChipWaveform(Family family, double alpha, double chip_duration,
                           std::shared_ptr<const SampledSpectrum> spectrum)
    : family_(family), alpha_(alpha), chip_duration_(chip_duration), spectrum_(std::move(spectrum)) {
    if (!(chip_duration > 0.0)) throw std::invalid_argument("chip duration must be positive");
}

ChipWaveform ChipWaveform::sinc(double chip_duration) { return {Family::sinc, 0.0, chip_duration, nullptr}; }

ChipWaveform ChipWaveform::srrc(double alpha, double chip_duration) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("SRRC roll-off must lie in [0, 1]");
    return {Family::srrc, alpha, chip_duration, nullptr};
}

ChipWaveform ChipWaveform::custom(SampledSpectrum spectrum, double chip_duration) {
    const auto& w = spectrum.omega;
    const auto& d = spectrum.density;
    if (w.size() < 2 || w.size() != d.size()) throw std::invalid_argument("custom spectrum needs >= 2 samples");
    double energy = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(d[i] >= 0.0) || !std::isfinite(d[i])) throw std::invalid_argument("spectral density must be non-negative");
        if (i && !(w[i] > w[i - 1])) throw std::invalid_argument("spectrum frequencies must increase strictly");
        if (i) energy += 0.5 * (d[i] + d[i - 1]) * (w[i] - w[i - 1]);
    }
    energy /= 2.0 * pi;
    if (std::abs(energy - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "custom spectrum does not have unit energy (got " << energy << ")";
        throw std::invalid_argument(os.str());
    }
    return {Family::custom, 0.0, chip_duration, std::make_shared<const SampledSpectrum>(std::move(spectrum))};
}

ChipWaveform ChipWaveform::parse(const std::string& name) {
    if (name == "sinc") return sinc();
    if (name.rfind("srrc:", 0) == 0) {
        std::size_t used = 0;
        double alpha = 0.0;
        try {
            alpha = std::stod(name.substr(5), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != name.size() - 5) throw std::invalid_argument("bad SRRC roll-off in '" + name + "'");
        return srrc(alpha);
    }
    if (name.rfind("csv:", 0) == 0) return load_csv(name.substr(4));
    throw std::invalid_argument("unknown waveform '" + name + "' (expected sinc, srrc:<alpha> or csv:<path>)");
}

ChipWaveform ChipWaveform::load_csv(const std::string& path, double chip_duration) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spectrum file " + path);
    SampledSpectrum s;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream is(line);
        double w, d;
        if (!(is >> w >> d)) {
            if (s.omega.empty()) continue;  // header
            throw std::invalid_argument("malformed spectrum row: " + line);
        }
        s.omega.push_back(w);
        s.density.push_back(d);
    }
    return custom(std::move(s), chip_duration);
}

double ChipWaveform::bandwidth() const {
    switch (family_) {
    case Family::sinc: return 0.5 / chip_duration_;
    case Family::srrc: return (1.0 + alpha_) / (2.0 * chip_duration_);
    case Family::custom: {
        const double edge = std::max(std::abs(spectrum_->omega.front()), std::abs(spectrum_->omega.back()));
        return edge / (2.0 * pi) / chip_duration_;
    }
    }
    return 0.0;
}

std::string ChipWaveform::name() const {
    switch (family_) {
    case Family::sinc: return "sinc";
    case Family::srrc: {
        std::ostringstream os;
        os << "srrc:" << alpha_;
        return os.str();
    }
    case Family::custom: return "custom";
    }
    return "?";
}

double ChipWaveform::normalized_density(double u) const {
    const double a = std::abs(u);
    switch (family_) {
    case Family::sinc: return a <= 0.5 ? 1.0 : 0.0;
    case Family::srrc: {
        const double flat = (1.0 - alpha_) / 2.0;
        const double edge = (1.0 + alpha_) / 2.0;
        if (a <= flat) return 1.0;
        if (a > edge) return 0.0;
        const double c = std::cos(pi / (2.0 * alpha_) * (a - flat));
        return c * c;
    }
    case Family::custom: return (*spectrum_)(2.0 * pi * u);
    }
    return 0.0;
}

std::vector<double> ChipWaveform::density_breakpoints() const {
    switch (family_) {
    case Family::sinc: return {-0.5, 0.5};
    case Family::srrc: {
        if (alpha_ == 0.0) return {-0.5, 0.5};
        const double flat = (1.0 - alpha_) / 2.0, edge = (1.0 + alpha_) / 2.0;
        if (flat == 0.0) return {-edge, 0.0, edge};
        return {-edge, -flat, flat, edge};
    }
    case Family::custom: {
        std::vector<double> u;
        u.reserve(spectrum_->omega.size());
        for (double w : spectrum_->omega) u.push_back(w / (2.0 * pi));
        return u;
    }
    }
    return {};
}

double ChipWaveform::autocorrelation(double x) const { return autocorrelation_chips(x / chip_duration_); }

double ChipWaveform::autocorrelation_chips(double x) const {
    switch (family_) {
    case Family::sinc:
        if (is_nonzero_integer(x)) return 0.0;
        return sinc_fn(x);
    case Family::srrc:
        if (is_nonzero_integer(x)) return 0.0;
        if (alpha_ == 0.0) return sinc_fn(x);
        return sinc_fn(x) * raised_cosine_taper(alpha_, x);
    case Family::custom: {
        const auto bp = density_breakpoints();
        double r = 0.0;
        for (std::size_t i = 0; i + 1 < bp.size(); ++i)
            r += integrate([&](double u) { return normalized_density(u) * std::cos(2.0 * pi * u * x); }, bp[i],
                           bp[i + 1], 1e-9);
        return r;
    }
    }
    return 0.0;
}

int ChipWaveform::minimum_truncation() const {
    constexpr double tail = 1e-2;
    if (family_ == Family::srrc && alpha_ > 0.0) {
        for (int L = 1;; ++L) {
            const double y = 2.0 * alpha_ * L;
            if (y > 1.0 && 1.0 / (pi * L * (y * y - 1.0)) <= tail) return L;
            if (1.0 / (pi * L) <= tail) return L;
        }
    }
    return static_cast<int>(std::ceil(1.0 / (pi * tail)));
}

int ChipWaveform::default_truncation() const {
    if (family_ == Family::srrc && alpha_ >= 0.22) return 30;
    return 200;
}

// ---------------------------------------------------------------------------

WMomentTable::WMomentTable(const ChipWaveform& waveform, int n_max) : label_(waveform.name()) {
    if (n_max < 1) throw std::invalid_argument("W table needs n_max >= 1");
    values_.reserve(static_cast<std::size_t>(n_max));
    for (int m = 1; m <= n_max; ++m) values_.push_back(w_moment(waveform, m));
}

WMomentTable::WMomentTable(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {}

double WMomentTable::operator[](int m) const {
    if (m < 1 || m > size()) throw std::out_of_range("W table index out of range");
    return values_[static_cast<std::size_t>(m - 1)];
}

double w_moment(const ChipWaveform& w, int m) {
    if (m < 1) throw std::invalid_argument("w_moment requires m >= 1");
    if (w.family() == ChipWaveform::Family::sinc) return 1.0;
    const auto bp = w.density_breakpoints();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i)
        total += integrate([&](double u) { return std::pow(w.normalized_density(u), m); }, bp[i], bp[i + 1], 1e-10);
    if (!std::isfinite(total)) throw std::domain_error("spectral density is not integrable");
    return total;
}

namespace {

// Sum over n_1..n_{m-1} in [-L, L] of the cyclic product, by passing a vector
// through the m-1 intermediate lattice indices. `eta` in chips.
double lattice_sum_chips(const ChipWaveform& w, int m, const std::vector<double>& eta, int n0, int L) {
    const int width = 2 * L + 1;
    std::vector<double> v(static_cast<std::size_t>(width)), next(v.size());
    for (int a = -L; a <= L; ++a) v[a + L] = w.autocorrelation_chips((n0 - a) + eta[0] - eta[1]);
    for (int i = 1; i + 1 < m; ++i) {
        std::vector<double> kernel(static_cast<std::size_t>(2 * width - 1));
        for (int d = -(width - 1); d <= width - 1; ++d)
            kernel[d + width - 1] = w.autocorrelation_chips(d + eta[i] - eta[i + 1]);
        for (int b = 0; b < width; ++b) {
            double s = 0.0;
            for (int a = 0; a < width; ++a) s += v[a] * kernel[(a - b) + width - 1];
            next[b] = s;
        }
        std::swap(v, next);
    }
    double total = 0.0;
    for (int c = -L; c <= L; ++c) total += v[c + L] * w.autocorrelation_chips((c - n0) + eta[m - 1] - eta[0]);
    return total;
}

}  // namespace

double xi_lattice_sum(const ChipWaveform& w, int m, const std::vector<double>& etas, int n0, int truncation) {
    if (m < 2) throw std::invalid_argument("xi_lattice_sum requires m >= 2");
    if (static_cast<int>(etas.size()) != m) throw std::invalid_argument("xi_lattice_sum needs m offsets");
    if (truncation < 1) throw std::invalid_argument("truncation must be positive");
    std::vector<double> eta(etas);
    for (double& e : eta) e /= w.chip_duration();
    return lattice_sum_chips(w, m, eta, n0, truncation);
}

MonteCarloEstimate xi_lattice_expectation(const ChipWaveform& w, int m, int n0, int truncation, int draws,
                                          std::uint64_t seed) {
    if (m < 2) throw std::invalid_argument("xi_lattice_expectation requires m >= 2");
    if (draws < 2) throw std::invalid_argument("need at least two draws");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> eta(static_cast<std::size_t>(m), 0.0);
    double sum = 0.0, sum_sq = 0.0;
    for (int d = 0; d < draws; ++d) {
        for (int i = 1; i < m; ++i) eta[i] = unit(rng);
        const double x = lattice_sum_chips(w, m, eta, n0, truncation);
        sum += x;
        sum_sq += x * x;
    }
    MonteCarloEstimate est;
    est.draws = draws;
    est.mean = sum / draws;
    const double var = std::max(0.0, (sum_sq - draws * est.mean * est.mean) / (draws - 1));
    est.standard_error = std::sqrt(var / draws);
    return est;
}

}  // namespace spectra
