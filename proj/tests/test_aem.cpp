#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spectra/aem.hpp"

using namespace spectra;
using doctest::Approx;

namespace {

const double pi = std::acos(-1.0);

struct NcWithComplement {
    oracle::Labels pi, kc;
};

// Noncrossing partitions with their complements, both from the oracle.
const std::vector<NcWithComplement>& nc_table(int n) {
    static std::map<int, std::vector<NcWithComplement>> cache;
    auto& v = cache[n];
    if (v.empty())
        for (const auto& l : oracle::all_set_partitions(n))
            if (!oracle::crossing(l)) v.push_back({l, oracle::kreweras_by_definition(l)});
    return v;
}

std::vector<int> class_sizes(const oracle::Labels& l) {
    std::vector<int> s(static_cast<std::size_t>(oracle::classes(l)), 0);
    for (int v : l) ++s[v];
    return s;
}

// sum over pi in NC(n) of beta^{|pi|-1} prod_{V in pi} p(|V|) prod_{U in KC(pi)} w(|U|)
template <class P, class W>
double brute(int n, double beta, P&& p, W&& w) {
    double total = 0.0;
    for (const auto& e : nc_table(n)) {
        double term = std::pow(beta, oracle::classes(e.pi) - 1);
        for (int s : class_sizes(e.pi)) term *= p(s);
        for (int s : class_sizes(e.kc)) term *= w(s);
        total += term;
    }
    return total;
}

auto one = [](int) { return 1.0; };

}  // namespace

TEST_CASE("Marchenko-Pastur moments") {
    CHECK(mp_moment(1, 0.37) == 1.0);
    CHECK(mp_moment(2, 0.5) == Approx(1.5).epsilon(1e-15));
    CHECK(mp_moment(3, 1.0) == 5.0);
    const auto cat = oracle::catalan_table(12);
    for (int n = 1; n <= 12; ++n) CHECK(mp_moment(n, 1.0) == static_cast<double>(cat[n]));
    for (double beta : {0.0, 0.25, 2.0})
        for (int n = 1; n <= 6; ++n) CHECK(mp_moment(n, beta) == Approx(brute(n, beta, one, one)).epsilon(1e-13));
    CHECK(mp_moment(5, 0.0) == 1.0);
    CHECK_THROWS_AS(mp_moment(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(mp_moment(2, -1.0), std::invalid_argument);
}

TEST_CASE("Marchenko-Pastur density") {
    CHECK(mp_density(4.0, 1.0) == 0.0);
    CHECK(mp_density(2.0, 1.0) == Approx(1.0 / (2 * pi)).epsilon(1e-15));
    CHECK(mp_atom(0.25) == 0.0);
    CHECK(mp_atom(2.0) == 0.5);
    for (double beta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const auto [a, b] = mp_support(beta);
        const double mass = oracle::mp_cdf(b, beta) - mp_atom(beta);
        CHECK(mass == Approx(std::min(1.0, 1.0 / beta)).epsilon(1e-6));
        // moments of density plus atom
        boost::math::quadrature::tanh_sinh<double> integrator;
        for (int n = 1; n <= 4; ++n) {
            const double m =
                integrator.integrate([&](double x) { return std::pow(x, n) * mp_density(x, beta); }, a, b);
            CHECK(m == Approx(mp_moment(n, beta)).epsilon(1e-7));
        }
    }
    CHECK_THROWS_AS(mp_density(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("faded chip-synchronous moments") {
    const auto ray = PowerMomentSpec::rayleigh(10);
    const auto flat = PowerMomentSpec::unfaded(10);
    CHECK(aem_cs_faded(2, 1.0, ray) == 3.0);
    CHECK(aem_cs_faded(1, 0.7, ray) == 1.0);
    CHECK(aem_cs_faded(1, 0.7, PowerMomentSpec::rayleigh(3, 2.0)) == 2.0);
    for (double beta : {0.25, 0.5, 1.0, 2.0})
        for (int n = 1; n <= 6; ++n) {
            CHECK(aem_cs_faded(n, beta, flat) == Approx(mp_moment(n, beta)).epsilon(1e-13));
            CHECK(aem_cs_faded(n, beta, ray) ==
                  Approx(brute(n, beta, [&](int s) { return ray[s]; }, one)).epsilon(1e-13));
        }
    CHECK_THROWS_AS(aem_cs_faded(5, 1.0, PowerMomentSpec::rayleigh(3)), std::invalid_argument);
}

TEST_CASE("chip-asynchronous moments") {
    const WMomentTable w_half(ChipWaveform::srrc(0.5), 10);
    const WMomentTable w_full(ChipWaveform::srrc(1.0), 10);
    const WMomentTable w_sinc(ChipWaveform::sinc(), 10);
    CHECK(aem_ca(2, 0.5, w_half) == Approx(1.4375).epsilon(1e-12));
    CHECK(aem_ca(1, 0.5, w_half) == Approx(1.0).epsilon(1e-12));
    for (double beta : {0.25, 0.5, 1.0, 2.0})
        for (int n = 1; n <= 6; ++n) {
            CHECK(aem_ca(n, beta, w_sinc) == Approx(mp_moment(n, beta)).epsilon(1e-14));
            CHECK(aem_ca(n, beta, w_full) ==
                  Approx(brute(n, beta, one, [&](int s) { return w_full[s]; })).epsilon(1e-13));
        }
    // beta = 0: only the all-singleton term survives
    CHECK(aem_ca(4, 0.0, w_half) == Approx(1.0));
    CHECK_THROWS_AS(aem_ca(12, 1.0, w_half), std::invalid_argument);
}

TEST_CASE("faded chip-asynchronous moments") {
    const WMomentTable w_full(ChipWaveform::srrc(1.0), 10);
    const WMomentTable w_sinc(ChipWaveform::sinc(), 10);
    const auto ray = PowerMomentSpec::rayleigh(10);
    const auto flat = PowerMomentSpec::unfaded(10);
    CHECK(aem_ca_faded(2, 1.0, w_full, ray) == Approx(2.75).epsilon(1e-12));
    CHECK(aem_ca_faded(2, 1.0, w_sinc, ray) == Approx(3.0).epsilon(1e-14));
    for (double beta : {0.25, 0.5, 1.0, 2.0})
        for (int n = 1; n <= 6; ++n) {
            CHECK(aem_ca_faded(n, beta, w_full, flat) == Approx(aem_ca(n, beta, w_full)).epsilon(1e-13));
            CHECK(aem_ca_faded(n, beta, w_full, ray) ==
                  Approx(brute(n, beta, [&](int s) { return ray[s]; }, [&](int s) { return w_full[s]; }))
                      .epsilon(1e-13));
        }
}

TEST_CASE("equivalence chain") {
    const WMomentTable w_sinc(ChipWaveform::sinc(), 8);
    for (double beta : {0.25, 0.5, 1.0, 2.0})
        for (const auto& power : {PowerMomentSpec::unfaded(8), PowerMomentSpec::rayleigh(8)})
            for (int n = 1; n <= 8; ++n) {
                CHECK(aem_ca(n, beta, w_sinc) == Approx(mp_moment(n, beta)).epsilon(1e-12));
                CHECK(aem_ca_faded(n, beta, w_sinc, power) == Approx(aem_cs_faded(n, beta, power)).epsilon(1e-12));
            }
}

TEST_CASE("quadratic form moments") {
    CHECK(quadratic_form_moments(2, 1.0, MomentSequence({1.0, 2.0})) == 3.0);
    const auto point = MomentSequence::point_mass(1.0, 8);
    const WMomentTable w(ChipWaveform::srrc(0.3), 8);
    for (int n = 1; n <= 8; ++n) {
        CHECK(quadratic_form_moments(n, 0.6, point) == Approx(mp_moment(n, 0.6)).epsilon(1e-13));
        CHECK(quadratic_form_moments(n, 0.6, MomentSequence(w.values())) == aem_ca(n, 0.6, w));
    }
}

TEST_CASE("signed Catalan coefficients") {
    CHECK(s_coefficient(1) == 1);
    CHECK(s_coefficient(2) == -1);
    CHECK(s_coefficient(3) == 2);
    CHECK(s_coefficient(4) == -5);
    CHECK_THROWS(s_coefficient(0));
}

TEST_CASE("moments from cumulants") {
    const auto point = moments_from_cumulants(FreeCumulantSequence({1, 0, 0, 0, 0, 0}), 6);
    for (int n = 1; n <= 6; ++n) CHECK(point[n] == 1.0);
    for (double beta : {0.25, 1.0, 2.0}) {
        const auto m = moments_from_cumulants(cs_cumulants(10, beta), 10);
        for (int n = 1; n <= 10; ++n) CHECK(m[n] == Approx(mp_moment(n, beta)).epsilon(1e-13));
        const WMomentTable w(ChipWaveform::srrc(0.5), 10);
        const auto mca = moments_from_cumulants(ca_cumulants(10, beta, w), 10);
        for (int n = 1; n <= 10; ++n) CHECK(mca[n] == Approx(aem_ca(n, beta, w)).epsilon(1e-13));
    }
    // explicit sum over noncrossing partitions
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> c(8);
    for (auto& v : c) v = u(rng);
    const auto m = moments_from_cumulants(FreeCumulantSequence(c), 6);
    for (int n = 1; n <= 6; ++n) CHECK(m[n] == Approx(brute(n, 1.0, [&](int s) { return c[s - 1]; }, one)).epsilon(1e-12));
}

TEST_CASE("cumulants from moments") {
    for (double beta : {0.25, 1.0, 2.0}) {
        const auto c = cumulants_from_moments(mp_moments(12, beta), 12);
        for (int n = 1; n <= 12; ++n) CHECK(c[n] == Approx(std::pow(beta, n - 1)).epsilon(1e-9).scale(1.0));
    }
    const auto c1 = cumulants_from_moments(MomentSequence(std::vector<double>(6, 1.0)), 6);
    CHECK(c1[1] == 1.0);
    for (int n = 2; n <= 6; ++n) CHECK(c1[n] == 0.0);
    // at beta = 1 the faded synchronous law has cumulants P^(n)
    const auto ray = PowerMomentSpec::rayleigh(8);
    const auto cr = cumulants_from_moments(aem_cs_faded_table(8, 1.0, ray), 8);
    for (int n = 1; n <= 8; ++n) CHECK(cr[n] == Approx(ray[n]).epsilon(1e-9));
}

TEST_CASE("transform round trip on random cumulant sequences") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> c(12);
        for (auto& v : c) v = u(rng);
        const auto back = cumulants_from_moments(moments_from_cumulants(FreeCumulantSequence(c), 12), 12);
        for (int n = 1; n <= 12; ++n) CHECK(back[n] == Approx(c[n - 1]).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("free additive convolution") {
    const auto x = mp_moments(8, 0.5);
    const auto sum0 = free_add(x, MomentSequence::point_mass(0.0, 8), 8);
    for (int n = 1; n <= 8; ++n) CHECK(sum0[n] == Approx(x[n]).epsilon(1e-12));

    // means and variances add: m_2 = (1 + 1)^2 + beta1 + beta2
    const auto two = free_add(mp_moments(6, 0.3), mp_moments(6, 0.9), 6);
    CHECK(two[1] == Approx(2.0));
    CHECK(two[2] == Approx(4.0 + 0.3 + 0.9).epsilon(1e-12));
    const auto c = cumulants_from_moments(two, 6);
    for (int n = 1; n <= 6; ++n)
        CHECK(c[n] == Approx(std::pow(0.3, n - 1) + std::pow(0.9, n - 1)).epsilon(1e-9).scale(1.0));

    // semicircles: variances add, m_4 = 2 v^2
    const double s2 = 0.7;
    const auto semi = moments_from_cumulants(FreeCumulantSequence({0.0, s2, 0.0, 0.0}), 4);
    const auto both = free_add(semi, semi, 4);
    CHECK(both[2] == Approx(2 * s2));
    CHECK(both[4] == Approx(8 * s2 * s2).epsilon(1e-12));
    CHECK(both[3] == Approx(0.0).scale(1.0));
}

TEST_CASE("free multiplicative convolution") {
    const auto cb = cs_cumulants(8, 0.5);
    const auto ident = free_multiply(cb, MomentSequence::point_mass(1.0, 8), 8);
    const auto plain = moments_from_cumulants(cb, 8);
    for (int n = 1; n <= 8; ++n) CHECK(ident[n] == Approx(plain[n]).epsilon(1e-13));

    const auto ray = PowerMomentSpec::rayleigh(8);
    CHECK(free_multiply(cs_cumulants(2, 1.0), ray.as_moments(), 2)[2] == Approx(3.0));
    const WMomentTable w_full(ChipWaveform::srrc(1.0), 8);
    CHECK(free_multiply(ca_cumulants(2, 1.0, w_full), MomentSequence::point_mass(1.0, 2), 2)[2] == Approx(1.75));

    for (double beta : {0.25, 0.5, 1.0, 2.0})
        for (const auto& power : {PowerMomentSpec::unfaded(8), PowerMomentSpec::rayleigh(8)}) {
            const auto m = free_multiply(cs_cumulants(8, beta), power.as_moments(), 8);
            for (int n = 1; n <= 8; ++n) {
                CHECK(m[n] == Approx(aem_cs_faded(n, beta, power)).epsilon(1e-9));
                // the form sum_j beta^{n-j} over (n-j+1)-part profiles
                double printed = 0.0;
                for (int j = 1; j <= n; ++j)
                    for (const auto& c : profiles(n, n - j + 1)) {
                        double term = std::pow(beta, n - j) * static_cast<double>(count_by_profile(c));
                        for (int s : c.sizes()) term *= power[s];
                        printed += term;
                    }
                CHECK(m[n] == Approx(printed).epsilon(1e-9));
            }
        }
}

TEST_CASE("moment sequence invariants") {
    for (double beta : {0.25, 1.0, 2.0}) {
        const auto m = mp_moments(8, beta);
        CHECK(m[2] >= m[1] * m[1]);
        // Hankel determinants up to order 4 (3x3 on m_0..m_4)
        const double h2 = m[0] * m[2] - m[1] * m[1];
        const double h3 = m[0] * (m[2] * m[4] - m[3] * m[3]) - m[1] * (m[1] * m[4] - m[3] * m[2]) +
                          m[2] * (m[1] * m[3] - m[2] * m[2]);
        CHECK(h2 > 0.0);
        CHECK(h3 > 0.0);
    }
    CHECK(MomentSequence({1.0, 2.0})[0] == 1.0);
    CHECK_THROWS_AS(MomentSequence({1.0})[2], std::out_of_range);
    CHECK(PowerMomentSpec::rayleigh(4)[4] == 24.0);
    CHECK(PowerMomentSpec::unfaded(4, 2.0)[3] == 8.0);
    CHECK_THROWS(PowerMomentSpec::custom({1.0, -1.0}));
    CHECK_THROWS(PowerMomentSpec::parse("ricean", 4));
}

TEST_CASE("Carleman-style growth bound") {
    for (double alpha : {0.5, 1.0}) {
        const auto wf = ChipWaveform::srrc(alpha);
        const WMomentTable w(wf, 8);
        const double two_bw = wf.support_measure();
        for (double beta : {0.25, 0.5, 1.0, 2.0})
            for (int n = 1; n <= 8; ++n)
                CHECK(aem_ca(n, beta, w) <= std::pow(two_bw, n - 1) * w[n] * std::pow(1 + beta / two_bw, 2 * n));
    }
}
