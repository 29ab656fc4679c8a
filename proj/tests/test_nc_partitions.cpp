#include <doctest.h>

#include <map>
#include <set>

#include "oracles.hpp"
#include "spectra/nc_partitions.hpp"

using namespace spectra;

namespace {

oracle::Labels labels_of(const SetPartition& p) {
    // restricted growth form, 0-based
    oracle::Labels out(static_cast<std::size_t>(p.size()));
    std::map<int, int> relabel;
    for (int e = 1; e <= p.size(); ++e) {
        auto [it, fresh] = relabel.emplace(p.class_of(e), static_cast<int>(relabel.size()));
        out[e - 1] = it->second;
    }
    return out;
}

SetPartition from_oracle(const oracle::Labels& l) { return SetPartition::from_labels(l); }

}  // namespace

TEST_CASE("enumeration matches the noncrossing subset of all set partitions") {
    const auto cat = oracle::catalan_table(9);
    for (int n = 1; n <= 9; ++n) {
        std::set<oracle::Labels> brute;
        for (const auto& l : oracle::all_set_partitions(n))
            if (!oracle::crossing(l)) brute.insert(l);
        std::set<oracle::Labels> ours;
        for (const auto& p : enumerate_nc(n)) {
            CHECK(is_noncrossing(p));
            ours.insert(labels_of(p));
        }
        CHECK(ours == brute);
        CHECK(static_cast<long long>(brute.size()) == cat[n]);
        CHECK(catalan(n) == cat[n]);
    }
}

TEST_CASE("is_noncrossing agrees with the arc oracle on every set partition") {
    for (int n = 1; n <= 7; ++n)
        for (const auto& l : oracle::all_set_partitions(n)) CHECK(is_noncrossing(from_oracle(l)) == !oracle::crossing(l));
}

TEST_CASE("Kreweras complement of the worked example") {
    const SetPartition pi(8, {{1}, {2, 3, 7, 8}, {4, 5}, {6}});
    const SetPartition expected(8, {{1, 8}, {2}, {3, 5, 6}, {4}, {7}});
    CHECK(kreweras(pi) == expected);
    CHECK(build_kgraph(pi).cycle_decomposition == expected);
}

TEST_CASE("Kreweras complement equals the coarsest compatible partition") {
    for (int n = 1; n <= 6; ++n)
        for (const auto& p : enumerate_nc(n)) {
            const auto brute = from_oracle(oracle::kreweras_by_definition(labels_of(p)));
            CHECK_MESSAGE(kreweras(p) == brute, p.str());
        }
}

TEST_CASE("Kreweras complement properties") {
    for (int n = 1; n <= 8; ++n)
        for (const auto& p : enumerate_nc(n)) {
            const auto kc = kreweras(p);
            CHECK(is_noncrossing(kc));
            CHECK(kc.class_count() == n + 1 - p.class_count());
            // applying it twice rotates the partition by one position
            const auto kc2 = kreweras(kc);
            std::vector<int> rotated(static_cast<std::size_t>(n));
            for (int e = 1; e <= n; ++e) rotated[e % n] = p.class_of(e);
            std::vector<int> back(static_cast<std::size_t>(n));
            for (int e = 1; e <= n; ++e) back[(e + n - 2) % n] = p.class_of(e);
            CHECK((kc2 == SetPartition::from_labels(rotated) || kc2 == SetPartition::from_labels(back)));
        }
}

TEST_CASE("K-graph cycles are the Kreweras complement and the graph is connected") {
    for (int n = 1; n <= 8; ++n)
        for (const auto& p : enumerate_nc(n)) {
            const auto g = build_kgraph(p);
            CHECK(g.vertex_count == p.class_count());
            CHECK(static_cast<int>(g.edges.size()) == n);
            CHECK(g.connected());
            CHECK(g.cycle_decomposition == kreweras(p));
        }
}

TEST_CASE("crossing input is rejected") {
    const SetPartition crossing(4, {{1, 3}, {2, 4}});
    CHECK_FALSE(is_noncrossing(crossing));
    CHECK_THROWS_AS(kreweras(crossing), std::invalid_argument);
    // the K-graph itself is defined for any partition
    CHECK(build_kgraph(crossing).edges.size() == 4);
}

TEST_CASE("K-graph examples") {
    const auto ring = build_kgraph(SetPartition::from_labels({0, 1, 2, 3, 4}));
    CHECK(ring.vertex_count == 5);
    CHECK(ring.cycle_count() == 1);
    const auto loops = build_kgraph(SetPartition(2, {{1, 2}}));
    CHECK(loops.vertex_count == 1);
    CHECK(loops.cycle_count() == 2);
}

TEST_CASE("narayana numbers match brute-force class counts") {
    for (int n = 1; n <= 9; ++n) {
        std::map<int, long long> by_classes;
        for (const auto& l : oracle::all_set_partitions(n))
            if (!oracle::crossing(l)) ++by_classes[oracle::classes(l)];
        Count total = 0;
        for (int j = 1; j <= n; ++j) {
            CHECK(narayana(n, j) == by_classes[j]);
            total += narayana(n, j);
        }
        CHECK(total == catalan(n));
    }
    CHECK(narayana(4, 2) == 6);
}

TEST_CASE("profile counts match brute force") {
    for (int n = 1; n <= 6; ++n) {
        std::map<std::vector<int>, long long> single;
        std::map<std::pair<std::vector<int>, std::vector<int>>, long long> joint;
        for (const auto& l : oracle::all_set_partitions(n)) {
            if (oracle::crossing(l)) continue;
            const auto kc = oracle::kreweras_by_definition(l);
            ++single[oracle::profile(l)];
            ++joint[{oracle::profile(l), oracle::profile(kc)}];
        }
        for (int j = 1; j <= n; ++j)
            for (const auto& b : profiles(n, j)) {
                CHECK_MESSAGE(count_by_profile(b) == single[b.sizes()], b.str());
                for (const auto& c : profiles(n, n + 1 - j))
                    CHECK_MESSAGE(count_by_profile_pair(b, c) == joint[std::make_pair(b.sizes(), c.sizes())], b.str() << c.str());
            }
    }
}

TEST_CASE("profile counts for n = 7, 8 against enumeration") {
    for (int n = 7; n <= 8; ++n) {
        std::map<std::vector<int>, long long> single;
        std::map<std::pair<std::vector<int>, std::vector<int>>, long long> joint;
        for (const auto& p : enumerate_nc(n)) {
            ++single[p.size_profile()];
            ++joint[{p.size_profile(), kreweras(p).size_profile()}];
        }
        for (int j = 1; j <= n; ++j)
            for (const auto& b : profiles(n, j)) {
                CHECK(count_by_profile(b) == single[b.sizes()]);
                for (const auto& c : profiles(n, n + 1 - j))
                    CHECK(count_by_profile_pair(b, c) == joint[std::make_pair(b.sizes(), c.sizes())]);
            }
    }
}

TEST_CASE("profile count examples") {
    CHECK(count_by_profile(ClassSizeProfile({2, 1, 1})) == 6);
    CHECK(count_by_profile(ClassSizeProfile({2, 2})) == 2);
    CHECK(count_by_profile(ClassSizeProfile({4})) == 1);
    CHECK(multiplicity_f(ClassSizeProfile({2, 1, 1})) == 2);
    CHECK(count_by_profile_pair(ClassSizeProfile({2, 1, 1}), ClassSizeProfile({2, 2})) == 2);
    CHECK(count_by_profile_pair(ClassSizeProfile({2, 1, 1}), ClassSizeProfile({3, 1})) == 4);
    CHECK_THROWS_AS(count_by_profile_pair(ClassSizeProfile({2, 1, 1}), ClassSizeProfile({3})), std::invalid_argument);
    CHECK_THROWS(ClassSizeProfile({1, 2}));
    CHECK_THROWS(ClassSizeProfile({0}));
}

TEST_CASE("profile generation") {
    const auto p = profiles(5, 2);
    REQUIRE(p.size() == 2);
    CHECK(p[0].sizes() == std::vector<int>{4, 1});
    CHECK(p[1].sizes() == std::vector<int>{3, 2});
    std::size_t total = 0;
    for (int j = 1; j <= 10; ++j) total += profiles(10, j).size();
    CHECK(total == 42);  // integer partitions of 10
}

TEST_CASE("summation identities in integer arithmetic") {
    const auto t = oracle::pascal(12);
    auto fact = [](int n) {
        Count r = 1;
        for (int i = 2; i <= n; ++i) r *= i;
        return r;
    };
    auto f_of = [&](const std::vector<int>& sizes) {
        std::map<int, int> mult;
        for (int s : sizes) ++mult[s];
        Count r = 1;
        for (const auto& [size, k] : mult) r *= fact(k);
        return r;
    };
    for (int n = 1; n <= 12; ++n)
        for (int j = 1; j <= n; ++j) {
            // sum over j-part profiles of n(n-1)..(n-j+2)/f = C(n,j)C(n,j-1)/n, scaled by j!
            Count falling = 1;
            for (int i = 0; i < j - 1; ++i) falling *= n - i;
            Count lhs = 0;
            for (const auto& c : profiles(n, j)) lhs += falling * (fact(j) / f_of(c.sizes()));
            CHECK(lhs * n == t[n][j] * t[n][j - 1] * fact(j));

            // sum over (n-j+1)-part profiles of n(n-j)!(j-1)!/f = n(n-1)..(n-j+2), scaled by (n-j+1)!
            Count rhs = 0;
            for (const auto& b : profiles(n, n - j + 1))
                rhs += n * fact(n - j) * fact(j - 1) * (fact(n - j + 1) / f_of(b.sizes()));
            CHECK(rhs == falling * fact(n - j + 1));

            // the library's pair weights marginalize to the single-profile count on both sides
            for (const auto& c : profiles(n, j)) {
                Count sum = 0;
                for (const auto& b : profiles(n, n - j + 1)) sum += count_by_profile_pair(c, b);
                CHECK(sum == count_by_profile(c));
            }
            for (const auto& b : profiles(n, n - j + 1)) {
                Count sum = 0;
                for (const auto& c : profiles(n, j)) sum += count_by_profile_pair(c, b);
                CHECK(sum == count_by_profile(b));
            }
        }
}

TEST_CASE("exact integer helpers") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(20) == static_cast<Count>(2432902008176640000LL));
    CHECK_THROWS_AS(factorial(40), std::overflow_error);
    CHECK(binomial(10, 3) == 120);
    CHECK(falling_factorial(6, 3) == 120);
    CHECK_THROWS_AS(exact_div(7, 2), std::domain_error);
    CHECK(to_string(static_cast<Count>(-42)) == "-42");
    CHECK_THROWS(for_each_nc(0, [](const SetPartition&) {}));
}
