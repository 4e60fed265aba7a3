#pragma once

#include <optional>
#include <utility>

#include "ddopt/baselines.hpp"
#include "ddopt/errors.hpp"
#include "ddopt/rational.hpp"
#include "ddopt/tree.hpp"
#include "ddopt/tree_gen.hpp"

namespace ddopt {

// Omega_min^t = (D_rla - D_max^t) / (D_rla - D_min^t); <= 0 for n >= 3.
inline Rational omega_min_tree(const FreeTree& t, const DmaxOptions& opts = {}) {
    if (t.n < 3) throw undefined_for_short("Omega_min undefined for n < 3");
    Rational d_rla = expected_D_rla(t.n);
    BaselineOptions bopts;
    bopts.want_d_max = true;
    bopts.d_max_opts = opts;
    BaselineBundle b = compute_baselines(t, bopts);
    if (!b.d_max) throw cap_exceeded("D_max not computable for this tree size");
    return (d_rla - Rational(*b.d_max)) / (d_rla - Rational(b.d_min));
}

// Analytic lower bound of alpha: Z1 = -(5n - 8 - 5(n mod 2)) / (n + 2 - n mod 2).
inline Rational z1_lower_bound(long long n) {
    if (n < 3) throw input_error("Z1 defined for n >= 3");
    return -Rational(5 * n - 8 - 5 * (n % 2), n + 2 - n % 2);
}

// Minimum Omega_min over bistar trees: scan the hub degree k1.
inline std::pair<Rational, long long> alpha_bistar(long long n) {
    if (n < 3) throw input_error("alpha_bistar defined for n >= 3");
    Rational d_rla = expected_D_rla(n);
    std::optional<Rational> best;
    long long best_k1 = 0;
    for (long long k1 = (n + 1) / 2; k1 <= n - 1; ++k1) {
        Rational value = (d_rla - Rational(d_max_bistar(n, k1))) /
                         (d_rla - Rational(d_min_bistar(n, k1)));
        if (!best || value < *best) {
            best = value;
            best_k1 = k1;
        }
    }
    return {*best, best_k1};
}

inline FreeTree make_bistar(int n, int k1) {
    // Hub 0 with degree k1 (leaves 2..k1, plus hub 1); hub 1 keeps the rest.
    std::vector<std::pair<int, int>> edges;
    if (n == 1) return build_tree(1, {});
    edges.emplace_back(0, 1);
    for (int v = 2; v <= k1; ++v) edges.emplace_back(0, v);
    for (int v = k1 + 1; v < n; ++v) edges.emplace_back(1, v);
    return build_tree(n, std::move(edges));
}

struct ExtremalReport {
    long long n = 0;
    Rational alpha;
    FreeTree witness_tree;
    Rational alpha_bistar_value;
    long long alpha_bistar_k1 = 0;
    Rational z1;
    long long trees_examined = 0;
    long long trees_pruned = 0;
};

inline constexpr int kDefaultAlphaCap = 12;

struct AlphaOptions {
    int cap = kDefaultAlphaCap;
    bool prune = true;  // skip D_max when the Omega_lower bound cannot beat alpha
    DmaxOptions d_max_opts{.cap = 64};  // alpha drives its own tree sizes
};

// Exact alpha(n): start from the bistar minimum, stream every non-bistar
// non-linear unlabelled tree, and compute D_max only when the lower bound
// (D_rla - D_max^b-bistar) / (D_rla - D_min^t) could still beat the incumbent.
inline ExtremalReport alpha_exact(long long n, const AlphaOptions& opts = {}) {
    if (n < 3) throw input_error("alpha defined for n >= 3");
    if (n > opts.cap) throw cap_exceeded("alpha_exact capped at n = " + std::to_string(opts.cap));

    ExtremalReport rep;
    rep.n = n;
    rep.z1 = z1_lower_bound(n);
    auto [ab, k1] = alpha_bistar(n);
    rep.alpha_bistar_value = ab;
    rep.alpha_bistar_k1 = k1;
    rep.alpha = ab;
    rep.witness_tree = make_bistar(static_cast<int>(n), static_cast<int>(k1));

    Rational d_rla = expected_D_rla(n);
    Rational bb_numerator = d_rla - Rational(d_max_balanced_bistar(n));
    DmaxOptions dopts = opts.d_max_opts;
    dopts.cap = std::max(dopts.cap, static_cast<int>(n));

    generate_free_trees(static_cast<int>(n), [&](const FreeTree& t) {
        TreeClass cls = classify(t);
        if (cls.has(TreeTag::Bistar) || cls.has(TreeTag::Linear)) return;
        ++rep.trees_examined;
        long long dmin = d_min_cost(t);
        Rational denom = d_rla - Rational(dmin);
        Rational omega_lower = bb_numerator / denom;
        if (opts.prune && rep.alpha < omega_lower) {
            ++rep.trees_pruned;
            return;
        }
        long long dmax = d_max_exact(t, dopts);
        Rational omega_min = (d_rla - Rational(dmax)) / denom;
        if (omega_min < rep.alpha) {
            rep.alpha = omega_min;
            rep.witness_tree = t;
        }
    }, std::max(kDefaultTreeGenCap, static_cast<int>(n)));
    return rep;
}

}  // namespace ddopt
