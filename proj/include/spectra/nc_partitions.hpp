#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace spectra {

/// Exact counting type. Every combinatorial weight in the library is carried
/// in 128-bit integers; an overflow raises std::overflow_error.
using Count = __int128;

std::string to_string(Count value);

Count checked_add(Count a, Count b);
Count checked_mul(Count a, Count b);
/// Exact division; throws std::domain_error when b does not divide a.
Count exact_div(Count a, Count b);

Count factorial(int n);
Count binomial(int n, int k);
Count catalan(int n);
/// n (n-1) ... (n-count+1); the empty product is 1.
Count falling_factorial(int n, int count);

/// A partition of {1..n}. Classes are sorted internally and ordered by their
/// minimum element.
class SetPartition {
public:
    SetPartition(int n, std::vector<std::vector<int>> classes);

    /// Builds from a 0-based label per element (labels need not be
    /// contiguous or canonical).
    static SetPartition from_labels(const std::vector<int>& labels);

    int size() const { return n_; }
    int class_count() const { return static_cast<int>(classes_.size()); }
    const std::vector<std::vector<int>>& classes() const { return classes_; }

    /// 0-based class index of element e (1-based).
    int class_of(int e) const { return label_[e - 1]; }
    const std::vector<int>& labels() const { return label_; }

    /// Non-ascending class sizes.
    std::vector<int> size_profile() const;

    std::string str() const;

    friend bool operator==(const SetPartition& a, const SetPartition& b) {
        return a.n_ == b.n_ && a.classes_ == b.classes_;
    }

private:
    int n_;
    std::vector<std::vector<int>> classes_;
    std::vector<int> label_;
};

/// Non-ascending tuple of positive integers; its sum is n.
class ClassSizeProfile {
public:
    explicit ClassSizeProfile(std::vector<int> sizes);

    int n() const { return n_; }
    int parts() const { return static_cast<int>(sizes_.size()); }
    const std::vector<int>& sizes() const { return sizes_; }
    int operator[](std::size_t i) const { return sizes_[i]; }

    std::string str() const;

    friend bool operator==(const ClassSizeProfile&, const ClassSizeProfile&) = default;
    friend auto operator<=>(const ClassSizeProfile& a, const ClassSizeProfile& b) {
        return a.sizes_ <=> b.sizes_;
    }

private:
    std::vector<int> sizes_;
    int n_;
};

/// Multigraph obtained by merging the vertices of the cycle k_1 .. k_n that
/// share a class. Edge r (1-based) joins the classes of k_r and k_{r+1}, with
/// k_{n+1} = k_1.
struct KGraph {
    struct Edge {
        int from;
        int to;
    };

    int vertex_count = 0;
    std::vector<Edge> edges;
    /// Biconnected components of the multigraph as sets of 1-based edge
    /// indices. For a noncrossing source these are exactly its cycles.
    SetPartition cycle_decomposition{1, {{1}}};

    int cycle_count() const { return cycle_decomposition.class_count(); }
    bool connected() const;
};

bool is_noncrossing(const SetPartition& p);

/// Calls `visit` once per noncrossing partition of {1..n}. The class holding
/// the smallest element is chosen first; its mates are taken in increasing
/// bitmask order, and the gaps they leave are filled recursively.
void for_each_nc(int n, const std::function<void(const SetPartition&)>& visit);
std::vector<SetPartition> enumerate_nc(int n);

/// Kreweras complement, re-indexed from the barred copy onto {1..n}.
SetPartition kreweras(const SetPartition& p);

KGraph build_kgraph(const SetPartition& p);

Count narayana(int n, int j);

/// Product over k of (number of entries equal to k)!.
Count multiplicity_f(const ClassSizeProfile& profile);

/// Number of noncrossing partitions with the given class-size profile.
Count count_by_profile(const ClassSizeProfile& profile);

/// Number of noncrossing partitions whose class sizes follow `pi_profile` and
/// whose Kreweras complement has class sizes `kc_profile`.
Count count_by_profile_pair(const ClassSizeProfile& pi_profile,
                            const ClassSizeProfile& kc_profile);

/// All non-ascending positive tuples with `parts` entries summing to n, in
/// decreasing lexicographic order.
std::vector<ClassSizeProfile> profiles(int n, int parts);

}  // namespace spectra
