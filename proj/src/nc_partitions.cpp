#include "spectra/nc_partitions.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace spectra {

std::string to_string(Count value) {
    if (value == 0) return "0";
    const bool negative = value < 0;
    std::string digits;
    while (value != 0) {
        int d = static_cast<int>(value % 10);
        digits.push_back(static_cast<char>('0' + (negative ? -d : d)));
        value /= 10;
    }
    if (negative) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

Count checked_add(Count a, Count b) {
    Count r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("128-bit count overflow in addition");
    return r;
}

Count checked_mul(Count a, Count b) {
    Count r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("128-bit count overflow in multiplication");
    return r;
}

Count exact_div(Count a, Count b) {
    if (b == 0 || a % b != 0)
        throw std::domain_error("inexact division " + to_string(a) + " / " + to_string(b));
    return a / b;
}

Count factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial of a negative number");
    Count r = 1;
    for (int i = 2; i <= n; ++i) r = checked_mul(r, i);
    return r;
}

Count binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    Count r = 1;
    for (int i = 1; i <= k; ++i) r = checked_mul(r, n - k + i) / i;
    return r;
}

Count catalan(int n) { return binomial(2 * n, n) / (n + 1); }

Count falling_factorial(int n, int count) {
    Count r = 1;
    for (int i = 0; i < count; ++i) r = checked_mul(r, n - i);
    return r;
}

// ---------------------------------------------------------------------------

SetPartition::SetPartition(int n, std::vector<std::vector<int>> classes)
    : n_(n), classes_(std::move(classes)), label_(static_cast<std::size_t>(std::max(n, 0)), -1) {
    if (n < 1) throw std::invalid_argument("partition ground set must be non-empty");
    for (auto& c : classes_) {
        if (c.empty()) throw std::invalid_argument("partition class is empty");
        std::sort(c.begin(), c.end());
    }
    std::sort(classes_.begin(), classes_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    for (std::size_t ci = 0; ci < classes_.size(); ++ci) {
        for (int e : classes_[ci]) {
            if (e < 1 || e > n) throw std::invalid_argument("partition element out of range");
            if (label_[e - 1] != -1) throw std::invalid_argument("partition classes overlap");
            label_[e - 1] = static_cast<int>(ci);
        }
    }
    for (int l : label_)
        if (l == -1) throw std::invalid_argument("partition does not cover {1..n}");
}

SetPartition SetPartition::from_labels(const std::vector<int>& labels) {
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(static_cast<int>(i) + 1);
    std::vector<std::vector<int>> classes;
    classes.reserve(groups.size());
    for (auto& [_, members] : groups) classes.push_back(std::move(members));
    return SetPartition(static_cast<int>(labels.size()), std::move(classes));
}

std::vector<int> SetPartition::size_profile() const {
    std::vector<int> sizes;
    sizes.reserve(classes_.size());
    for (const auto& c : classes_) sizes.push_back(static_cast<int>(c.size()));
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

std::string SetPartition::str() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t ci = 0; ci < classes_.size(); ++ci) {
        if (ci) os << ',';
        os << '{';
        for (std::size_t i = 0; i < classes_[ci].size(); ++i) os << (i ? "," : "") << classes_[ci][i];
        os << '}';
    }
    os << '}';
    return os.str();
}

ClassSizeProfile::ClassSizeProfile(std::vector<int> sizes) : sizes_(std::move(sizes)), n_(0) {
    if (sizes_.empty()) throw std::invalid_argument("profile must have at least one part");
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
        if (sizes_[i] < 1) throw std::invalid_argument("profile parts must be positive");
        if (i && sizes_[i] > sizes_[i - 1]) throw std::invalid_argument("profile must be non-ascending");
        n_ += sizes_[i];
    }
}

std::string ClassSizeProfile::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < sizes_.size(); ++i) os << (i ? "," : "") << sizes_[i];
    os << ')';
    return os.str();
}

// ---------------------------------------------------------------------------

bool is_noncrossing(const SetPartition& p) {
    const int n = p.size();
    const auto& lab = p.labels();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (lab[b] == lab[a]) continue;
            for (int c = b + 1; c < n; ++c) {
                if (lab[c] != lab[a]) continue;
                for (int d = c + 1; d < n; ++d)
                    if (lab[d] == lab[b]) return false;
            }
        }
    return true;
}

namespace {

// Fills labels for the contiguous run [lo, hi] (0-based) with noncrossing
// blocks, then hands control to `next`.
void fill_interval(int lo, int hi, std::vector<int>& labels, int& next_label,
                   const std::function<void()>& next) {
    if (lo > hi) {
        next();
        return;
    }
    const int rest = hi - lo;  // elements after lo
    const int label = next_label++;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest); ++mask) {
        std::vector<int> members{lo};
        for (int i = 0; i < rest; ++i)
            if (mask >> i & 1U) members.push_back(lo + 1 + i);
        for (int e : members) labels[e] = label;

        // gaps between consecutive members, plus the tail after the last one
        std::vector<std::pair<int, int>> gaps;
        for (std::size_t i = 0; i + 1 < members.size(); ++i)
            gaps.emplace_back(members[i] + 1, members[i + 1] - 1);
        gaps.emplace_back(members.back() + 1, hi);

        const int saved_label = next_label;
        std::function<void(std::size_t)> chain = [&](std::size_t g) {
            if (g == gaps.size()) {
                next();
                return;
            }
            fill_interval(gaps[g].first, gaps[g].second, labels, next_label, [&, g] { chain(g + 1); });
        };
        chain(0);
        next_label = saved_label;
        for (int e : members) labels[e] = -1;
    }
    --next_label;
}

}  // namespace

void for_each_nc(int n, const std::function<void(const SetPartition&)>& visit) {
    if (n < 1) throw std::invalid_argument("enumerate_nc requires n >= 1");
    if (n > 20) throw std::invalid_argument("enumerate_nc supports n <= 20");
    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    int next_label = 0;
    fill_interval(0, n - 1, labels, next_label, [&] { visit(SetPartition::from_labels(labels)); });
}

std::vector<SetPartition> enumerate_nc(int n) {
    std::vector<SetPartition> out;
    for_each_nc(n, [&](const SetPartition& p) { out.push_back(p); });
    return out;
}

SetPartition kreweras(const SetPartition& p) {
    if (!is_noncrossing(p)) throw std::invalid_argument("kreweras requires a noncrossing partition");
    const int n = p.size();
    // Each class, read in increasing order, is one cycle of a permutation P.
    // The complement is the cycle structure of P^{-1} composed with the
    // rotation i -> i+1.
    std::vector<int> pinv(static_cast<std::size_t>(n + 1));
    for (const auto& c : p.classes())
        for (std::size_t i = 0; i < c.size(); ++i) pinv[c[(i + 1) % c.size()]] = c[i];

    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    int label = 0;
    for (int start = 1; start <= n; ++start) {
        if (labels[start - 1] != -1) continue;
        for (int e = start; labels[e - 1] == -1; e = pinv[e % n + 1]) labels[e - 1] = label;
        ++label;
    }
    return SetPartition::from_labels(labels);
}

bool KGraph::connected() const {
    if (vertex_count <= 1) return true;
    std::vector<int> parent(static_cast<std::size_t>(vertex_count));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    int components = vertex_count;
    for (const auto& e : edges) {
        int a = find(e.from), b = find(e.to);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components == 1;
}

KGraph build_kgraph(const SetPartition& p) {
    const int n = p.size();
    KGraph g;
    g.vertex_count = p.class_count();
    g.edges.reserve(static_cast<std::size_t>(n));
    for (int r = 1; r <= n; ++r) g.edges.push_back({p.class_of(r), p.class_of(r % n + 1)});

    // Edge-biconnected blocks via Tarjan's lowpoint DFS. Parallel edges are
    // distinguished by index; self-loops form their own blocks.
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(g.vertex_count));
    std::vector<int> block(static_cast<std::size_t>(n), -1);
    int block_id = 0;
    for (int r = 0; r < n; ++r) {
        const auto& e = g.edges[r];
        if (e.from == e.to) {
            block[r] = block_id++;
            continue;
        }
        adj[e.from].emplace_back(e.to, r);
        adj[e.to].emplace_back(e.from, r);
    }

    std::vector<int> disc(static_cast<std::size_t>(g.vertex_count), -1), low(disc.size(), 0);
    std::vector<int> edge_stack;
    int timer = 0;
    std::function<void(int, int)> dfs = [&](int v, int via_edge) {
        disc[v] = low[v] = timer++;
        for (auto [w, r] : adj[v]) {
            if (r == via_edge) continue;
            if (disc[w] == -1) {
                edge_stack.push_back(r);
                dfs(w, r);
                low[v] = std::min(low[v], low[w]);
                if (low[w] >= disc[v]) {
                    int top;
                    do {
                        top = edge_stack.back();
                        edge_stack.pop_back();
                        block[top] = block_id;
                    } while (top != r);
                    ++block_id;
                }
            } else if (disc[w] < disc[v]) {
                edge_stack.push_back(r);
                low[v] = std::min(low[v], disc[w]);
            }
        }
    };
    for (int v = 0; v < g.vertex_count; ++v)
        if (disc[v] == -1) dfs(v, -1);

    g.cycle_decomposition = SetPartition::from_labels(block);
    return g;
}

// ---------------------------------------------------------------------------

Count narayana(int n, int j) {
    if (n < 1 || j < 1 || j > n) throw std::invalid_argument("narayana requires 1 <= j <= n");
    return exact_div(checked_mul(binomial(n, j), binomial(n, j - 1)), n);
}

Count multiplicity_f(const ClassSizeProfile& profile) {
    Count f = 1;
    const auto& s = profile.sizes();
    for (std::size_t i = 0; i < s.size();) {
        std::size_t run = i;
        while (run < s.size() && s[run] == s[i]) ++run;
        f = checked_mul(f, factorial(static_cast<int>(run - i)));
        i = run;
    }
    return f;
}

Count count_by_profile(const ClassSizeProfile& profile) {
    const int n = profile.n();
    const int j = profile.parts();
    return exact_div(falling_factorial(n, j - 1), multiplicity_f(profile));
}

Count count_by_profile_pair(const ClassSizeProfile& pi_profile, const ClassSizeProfile& kc_profile) {
    const int n = pi_profile.n();
    const int j = pi_profile.parts();
    if (kc_profile.n() != n) throw std::invalid_argument("profile pair must partition the same n");
    if (j + kc_profile.parts() != n + 1)
        throw std::invalid_argument("profile pair part counts must sum to n + 1");
    Count num = checked_mul(checked_mul(n, factorial(n - j)), factorial(j - 1));
    return exact_div(num, checked_mul(multiplicity_f(pi_profile), multiplicity_f(kc_profile)));
}

std::vector<ClassSizeProfile> profiles(int n, int parts) {
    if (n < 1 || parts < 1 || parts > n) throw std::invalid_argument("profiles requires 1 <= parts <= n");
    std::vector<ClassSizeProfile> out;
    std::vector<int> cur;
    std::function<void(int, int, int)> rec = [&](int remaining, int slots, int cap) {
        if (slots == 0) {
            if (remaining == 0) out.emplace_back(cur);
            return;
        }
        const int hi = std::min(cap, remaining - (slots - 1));
        const int lo = (remaining + slots - 1) / slots;
        for (int v = hi; v >= lo; --v) {
            cur.push_back(v);
            rec(remaining - v, slots - 1, v);
            cur.pop_back();
        }
    };
    rec(n, parts, n);
    return out;
}

}  // namespace spectra
