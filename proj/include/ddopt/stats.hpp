#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ddopt/corpus.hpp"
#include "ddopt/errors.hpp"
#include "ddopt/rng.hpp"

namespace ddopt {

enum class Side { GreaterIsSignificant, SmallerIsSignificant };

struct TestResult {
    double observed = 0;
    Side side = Side::GreaterIsSignificant;
    long long replicates = 0;   // T
    long long exceedances = 0;  // F
    double p_raw = 1.0;
    std::optional<double> p_adjusted;
};

// ---------------------------------------------------------------------------
// Monte Carlo significance of <Omega> (optionally restricted to one length)
// ---------------------------------------------------------------------------

struct McStatistic {
    std::optional<long long> length_stratum;  // <Omega>(n) when set, <Omega> otherwise
};

// Permutation test: every replicate reshuffles each sentence, recomputes the
// aggregate and counts replicates at least as extreme as the observation.
// Ties count as exceedances. Deterministic per seed: sentence s in replicate
// r draws from substream r * #sentences + s.
inline TestResult mc_significance(const Corpus& corpus, const McStatistic& stat, Side side,
                                  long long T, std::uint64_t seed) {
    if (T < 1) throw config_error("replicate count T must be >= 1");

    struct Item {
        const FreeTree* tree;
        double d_rla, d_min, scale;  // omega = (d_rla - D) * scale
        double observed_omega;
    };
    std::vector<Item> items;
    for (const auto& s : corpus.sentences) {
        if (s.tree.n < 3) continue;
        if (stat.length_stratum && s.tree.n != *stat.length_stratum) continue;
        Item it;
        it.tree = &s.tree;
        it.d_rla = s.baselines.d_rla.to_double();
        it.d_min = static_cast<double>(s.baselines.d_min);
        it.scale = 1.0 / (it.d_rla - it.d_min);
        it.observed_omega =
            (it.d_rla - static_cast<double>(sum_edge_lengths(s.tree, s.arrangement))) * it.scale;
        items.push_back(it);
    }
    if (items.empty()) throw empty_corpus("no sentences with n >= 3 in the requested stratum");

    double observed = 0;
    for (const auto& it : items) observed += it.observed_omega;
    observed /= static_cast<double>(items.size());

    long long F = 0;
    for (long long rep = 0; rep < T; ++rep) {
        double sum = 0;
        for (std::size_t s = 0; s < items.size(); ++s) {
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(rep) * items.size() + s);
            LinearArrangement a = shuffle_arrangement(items[s].tree->n, rng);
            double d = static_cast<double>(sum_edge_lengths(*items[s].tree, a));
            sum += (items[s].d_rla - d) * items[s].scale;
        }
        double replicate = sum / static_cast<double>(items.size());
        if (side == Side::GreaterIsSignificant ? replicate >= observed : replicate <= observed)
            ++F;
    }
    TestResult res;
    res.observed = observed;
    res.side = side;
    res.replicates = T;
    res.exceedances = F;
    res.p_raw = static_cast<double>(F) / static_cast<double>(T);
    return res;
}

// Monte Carlo p-values of exactly 0 understate the truth; replace them by
// (1 - epsilon) / T before any multiple-comparison correction.
inline std::vector<double> replace_zero_pvalues(std::vector<double> ps, long long T,
                                                double epsilon = 0.01) {
    for (double& p : ps)
        if (p == 0.0) p = (1.0 - epsilon) / static_cast<double>(T);
    return ps;
}

// Holm's step-down adjustment: q_i = min{1, max[p_i (m + 1 - i), q_{i-1}]}
// on the ascending p's, returned in the original order.
inline std::vector<double> holm_adjust(const std::vector<double>& ps) {
    const std::size_t m = ps.size();
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ps[a] < ps[b]; });
    std::vector<double> qs(m);
    double prev = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double q = std::min(1.0, std::max(ps[idx[i]] * static_cast<double>(m - i), prev));
        qs[idx[i]] = q;
        prev = q;
    }
    return qs;
}

// ---------------------------------------------------------------------------
// Kendall tau trend test
// ---------------------------------------------------------------------------

namespace detail {

// Concordant-minus-discordant count and tie totals.
struct KendallCounts {
    long long s = 0;             // C - D
    long long pairs = 0;         // n0
    long long tie_x = 0, tie_y = 0;
};

template <class T, class U>
KendallCounts kendall_counts(const std::vector<T>& x, const std::vector<U>& y) {
    KendallCounts k;
    std::size_t m = x.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            auto dx = (x[i] < x[j]) ? -1 : (x[j] < x[i] ? 1 : 0);
            auto dy = (y[i] < y[j]) ? -1 : (y[j] < y[i] ? 1 : 0);
            ++k.pairs;
            if (dx == 0 && dy == 0) { ++k.tie_x; ++k.tie_y; }
            else if (dx == 0) ++k.tie_x;
            else if (dy == 0) ++k.tie_y;
            else k.s += (dx == dy) ? 1 : -1;
        }
    return k;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace detail

template <class T, class U>
double kendall_tau_b(const std::vector<T>& x, const std::vector<U>& y) {
    auto k = detail::kendall_counts(x, y);
    double denom = std::sqrt(static_cast<double>(k.pairs - k.tie_x)) *
                   std::sqrt(static_cast<double>(k.pairs - k.tie_y));
    if (denom == 0.0) return 0.0;
    return static_cast<double>(k.s) / denom;
}

inline constexpr int kKendallExactLimit = 10;

// One-sided test of association between the length strata and the stratum
// means: exact permutation null up to kKendallExactLimit strata, otherwise the
// tie-corrected normal approximation.
inline TestResult kendall_trend_test(const std::vector<std::pair<long long, double>>& rows,
                                     Side side) {
    const std::size_t m = rows.size();
    if (m < 3) throw too_few_strata("trend test needs at least 3 length strata");
    std::vector<long long> x(m);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = rows[i].first;
        y[i] = rows[i].second;
    }
    auto obs = detail::kendall_counts(x, y);

    TestResult res;
    res.observed = kendall_tau_b(x, y);
    res.side = side;

    if (m <= kKendallExactLimit) {
        // Enumerate the distinct permutations of the means; x stays fixed, so
        // the tie structure (and hence the tau denominator) is constant and
        // comparing S = C - D is equivalent to comparing tau.
        std::vector<double> perm = y;
        std::sort(perm.begin(), perm.end());
        long long total = 0, extreme = 0;
        do {
            ++total;
            long long s = detail::kendall_counts(x, perm).s;
            if (side == Side::GreaterIsSignificant ? s >= obs.s : s <= obs.s) ++extreme;
        } while (std::next_permutation(perm.begin(), perm.end()));
        res.replicates = total;
        res.exceedances = extreme;
        res.p_raw = static_cast<double>(extreme) / static_cast<double>(total);
        return res;
    }

    // Tie-corrected null variance of S.
    auto tie_sizes = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        std::vector<long long> sizes;
        std::size_t i = 0;
        while (i < v.size()) {
            std::size_t j = i;
            while (j < v.size() && v[j] == v[i]) ++j;
            if (j - i > 1) sizes.push_back(static_cast<long long>(j - i));
            i = j;
        }
        return sizes;
    };
    std::vector<double> xd(x.begin(), x.end());
    auto tx = tie_sizes(xd);
    auto ty = tie_sizes(y);
    auto v_term = [](const std::vector<long long>& ts, auto f) {
        long long acc = 0;
        for (long long t : ts) acc += f(t);
        return acc;
    };
    double n = static_cast<double>(m);
    auto f0 = [](long long t) { return t * (t - 1) * (2 * t + 5); };
    auto f1 = [](long long t) { return t * (t - 1) * (t - 2); };
    auto f2 = [](long long t) { return t * (t - 1); };
    double var = (n * (n - 1) * (2 * n + 5) - v_term(tx, f0) - v_term(ty, f0)) / 18.0 +
                 static_cast<double>(v_term(tx, f1)) * v_term(ty, f1) / (9.0 * n * (n - 1) * (n - 2)) +
                 static_cast<double>(v_term(tx, f2)) * v_term(ty, f2) / (2.0 * n * (n - 1));
    double z = var > 0 ? static_cast<double>(obs.s) / std::sqrt(var) : 0.0;
    res.p_raw = side == Side::GreaterIsSignificant ? 1.0 - detail::normal_cdf(z)
                                                   : detail::normal_cdf(z);
    res.replicates = 0;
    return res;
}

// ---------------------------------------------------------------------------
// Pairwise language comparison (Fisher randomization on merged samples)
// ---------------------------------------------------------------------------

// p = proportion of T uniform |Y|-subsets of the merged multiset Z = X u Y
// whose sum exceeds sum(Y). Orient the inputs so that Y belongs to the
// language with the larger sample mean.
inline TestResult pairwise_language_test(const std::vector<double>& x,
                                         const std::vector<double>& y, long long T, Rng& rng) {
    if (x.empty() || y.empty()) throw empty_sample("pairwise test needs two nonempty samples");
    if (T < 1) throw config_error("replicate count T must be >= 1");
    std::vector<double> z;
    z.reserve(x.size() + y.size());
    z.insert(z.end(), x.begin(), x.end());
    z.insert(z.end(), y.begin(), y.end());
    double sum_y = std::accumulate(y.begin(), y.end(), 0.0);
    const std::size_t take = y.size();

    long long F = 0;
    std::vector<double> pool = z;
    for (long long rep = 0; rep < T; ++rep) {
        double sum = 0;
        std::size_t limit = pool.size();
        for (std::size_t i = 0; i < take; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(limit - i));
            std::swap(pool[i], pool[j]);
            sum += pool[i];
        }
        if (sum > sum_y) ++F;
    }
    TestResult res;
    res.observed = sum_y;
    res.side = Side::GreaterIsSignificant;
    res.replicates = T;
    res.exceedances = F;
    res.p_raw = static_cast<double>(F) / static_cast<double>(T);
    return res;
}

// ---------------------------------------------------------------------------
// Strict partial order of languages and its Hasse diagram
// ---------------------------------------------------------------------------

struct Digraph {
    int n = 0;
    std::vector<std::pair<int, int>> arcs;
};

namespace detail {

inline std::vector<std::vector<char>> reachability(const Digraph& g) {
    std::vector<std::vector<int>> out(g.n);
    for (auto [u, v] : g.arcs) out[u].push_back(v);
    std::vector<std::vector<char>> reach(g.n, std::vector<char>(g.n, 0));
    for (int s = 0; s < g.n; ++s) {
        std::vector<int> stack{s};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : out[u])
                if (!reach[s][v]) {
                    reach[s][v] = 1;
                    stack.push_back(v);
                }
        }
    }
    return reach;
}

inline void require_dag(const Digraph& g) {
    std::vector<int> indeg(g.n, 0);
    std::vector<std::vector<int>> out(g.n);
    for (auto [u, v] : g.arcs) {
        out[u].push_back(v);
        ++indeg[v];
    }
    std::vector<int> queue;
    for (int v = 0; v < g.n; ++v)
        if (indeg[v] == 0) queue.push_back(v);
    int seen = 0;
    while (!queue.empty()) {
        int u = queue.back();
        queue.pop_back();
        ++seen;
        for (int v : out[u])
            if (--indeg[v] == 0) queue.push_back(v);
    }
    if (seen != g.n) throw cycle_detected("transitive reduction input is not a DAG");
}

}  // namespace detail

// Minimal arc set with the same reachability; unique for DAGs. An arc is
// redundant iff its head is reachable from its tail through another arc.
inline Digraph transitive_reduction(const Digraph& g) {
    detail::require_dag(g);
    std::vector<std::vector<int>> out(g.n);
    for (auto [u, v] : g.arcs) out[u].push_back(v);
    auto reach = detail::reachability(g);
    Digraph r;
    r.n = g.n;
    for (auto [u, v] : g.arcs) {
        bool redundant = false;
        for (int w : out[u])
            if (w != v && reach[w][v]) { redundant = true; break; }
        if (!redundant) r.arcs.emplace_back(u, v);
    }
    return r;
}

struct PairwiseP {
    int low_index = 0;   // language with the smaller mean
    int high_index = 0;  // language with the larger mean
    double p = 1.0;
};

struct RankResult {
    std::vector<std::string> languages;
    std::vector<double> means;
    std::vector<PairwiseP> pairs;             // with raw p
    std::vector<double> adjusted;             // aligned with pairs
    double level = 0.05;
    Digraph order;                            // arc y->x means x < y
    Digraph reduced;
    std::vector<std::array<int, 3>> transitivity_violations;  // (x, y, z) with x<y<z but not x<z
};

inline RankResult build_partial_order(std::vector<std::string> languages,
                                      std::vector<double> means, std::vector<PairwiseP> pairs,
                                      double level = 0.05, bool apply_holm = true) {
    const int L = static_cast<int>(languages.size());
    if (means.size() != languages.size()) throw inconsistent_input("languages/means mismatch");
    RankResult res;
    res.languages = std::move(languages);
    res.means = std::move(means);
    res.level = level;
    res.pairs = std::move(pairs);

    std::vector<double> ps;
    ps.reserve(res.pairs.size());
    for (const auto& pr : res.pairs) {
        if (pr.low_index < 0 || pr.low_index >= L || pr.high_index < 0 || pr.high_index >= L ||
            pr.low_index == pr.high_index)
            throw inconsistent_input("bad language pair");
        if (res.means[pr.low_index] > res.means[pr.high_index])
            throw inconsistent_input("pair orientation does not match the means");
        ps.push_back(pr.p);
    }
    res.adjusted = apply_holm ? holm_adjust(ps) : ps;

    std::vector<std::vector<char>> less(L, std::vector<char>(L, 0));
    res.order.n = L;
    for (std::size_t i = 0; i < res.pairs.size(); ++i) {
        if (res.adjusted[i] <= level) {
            // significant: high is more optimized; arc high -> low means low < high
            res.order.arcs.emplace_back(res.pairs[i].high_index, res.pairs[i].low_index);
            less[res.pairs[i].low_index][res.pairs[i].high_index] = 1;
        }
    }
    for (int x = 0; x < L; ++x)
        for (int y = 0; y < L; ++y)
            for (int z = 0; z < L; ++z)
                if (less[x][y] && less[y][z] && !less[x][z])
                    res.transitivity_violations.push_back({x, y, z});
    res.reduced = transitive_reduction(res.order);
    return res;
}

// DOT rendering of the Hasse diagram; nodes ordered by descending mean, then
// name, so equal inputs give byte-identical output.
inline std::string hasse_dot(const RankResult& r) {
    std::vector<int> order(r.languages.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (r.means[a] != r.means[b]) return r.means[a] > r.means[b];
        return r.languages[a] < r.languages[b];
    });
    std::ostringstream os;
    os << "digraph hasse {\n";
    char buf[64];
    for (int idx : order) {
        std::snprintf(buf, sizeof(buf), "%.4f", r.means[idx]);
        os << "  \"" << r.languages[idx] << "\" [label=\"" << r.languages[idx]
           << "\\n<Omega>=" << buf << "\"];\n";
    }
    std::vector<std::pair<std::string, std::string>> arcs;
    for (auto [u, v] : r.reduced.arcs) arcs.emplace_back(r.languages[u], r.languages[v]);
    std::sort(arcs.begin(), arcs.end());
    for (auto& [a, b] : arcs) os << "  \"" << a << "\" -> \"" << b << "\";\n";
    os << "}\n";
    return os.str();
}

// Kolmogorov-Smirnov distance of a sample to U(0, 1).
inline double ks_uniform_statistic(std::vector<double> ps) {
    std::sort(ps.begin(), ps.end());
    double n = static_cast<double>(ps.size());
    double d = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        double hi = (static_cast<double>(i) + 1) / n - ps[i];
        double lo = ps[i] - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    return d;
}

}  // namespace ddopt
