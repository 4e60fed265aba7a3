#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "ddopt/arrangement.hpp"
#include "ddopt/errors.hpp"
#include "ddopt/rational.hpp"
#include "ddopt/tree.hpp"

namespace ddopt {

// ---------------------------------------------------------------------------
// Random baseline
// ---------------------------------------------------------------------------

// E[D] over uniformly random arrangements: (n^2 - 1) / 3.
inline Rational expected_D_rla(long long n) {
    if (n < 1) throw input_error("n must be >= 1");
    return Rational(static_cast<int128>(n) * n - 1, 3);
}

// Exact variance of D over uniformly random arrangements.
//
// Decomposition: V[D] = (n-1) V[len] + 2 q_s Cov_s + 2 q_d Cov_d where q_s
// counts edge pairs sharing a vertex and q_d the disjoint pairs. The pair
// covariances come from the joint distribution of 3 resp. 4 distinct uniform
// positions; the triple sum S = sum_y (A_y^2 - B_y) with A_y = sum_x |x-y|,
// B_y = sum_x (x-y)^2 gives the shared-vertex product moment, and the
// disjoint one follows from P^2 = T4 + 2 Q + 4 S with P, Q the first and
// second moments over ordered distinct pairs.
inline Rational variance_D_rla(const FreeTree& t) {
    const long long n = t.n;
    if (n < 2) throw degenerate_input("variance of D needs n >= 2");
    if (n == 2) return Rational(0);

    const Rational e1(n + 1, 3);                                        // E[len]
    const Rational var1(static_cast<int128>(n + 1) * (n - 2), 18);      // V[len]

    int128 q_s = 0;
    for (int v = 0; v < t.n; ++v) {
        int128 d = t.degree(v);
        q_s += d * (d - 1) / 2;
    }
    const int128 pairs = static_cast<int128>(n - 1) * (n - 2) / 2;
    const int128 q_d = pairs - q_s;

    // S over ordered distinct triples (x, y, z) of |x-y| |y-z|.
    int128 s_sum = 0;
    for (long long y = 1; y <= n; ++y) {
        int128 a = (static_cast<int128>(y) * (y - 1) + static_cast<int128>(n - y) * (n - y + 1)) / 2;
        auto sq_sum = [](int128 m) { return m * (m + 1) * (2 * m + 1) / 6; };
        int128 b = sq_sum(y - 1) + sq_sum(n - y);
        s_sum += a * a - b;
    }
    const Rational e_s = Rational(s_sum, static_cast<int128>(n) * (n - 1) * (n - 2));
    const Rational cov_s = e_s - e1 * e1;

    Rational result = Rational(n - 1) * var1 + Rational(2 * q_s, 1) * cov_s;
    if (q_d > 0) {
        const int128 p = static_cast<int128>(n) * (n * n - 1) / 3;
        const int128 q = static_cast<int128>(n) * n * (n - 1) * (n + 1) / 6;
        const int128 t4 = p * p - 2 * q - 4 * s_sum;
        const Rational e_d =
            Rational(t4, static_cast<int128>(n) * (n - 1) * (n - 2) * (n - 3));
        result += Rational(2 * q_d, 1) * (e_d - e1 * e1);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Closed-form extremal values
// ---------------------------------------------------------------------------

inline long long d_min_linear(long long n) { return n - 1; }

inline long long d_min_star(long long n) { return (n * n - n % 2) / 4; }

// Star of m edges spread over z positions, hub at one end.
inline long long d_max_star(long long m, long long z) {
    if (m < 0 || m >= z) throw bad_args("d_max_star requires 0 <= m < z");
    return m * (2 * z - m - 1) / 2;
}

// 1-regular graph (m independent edges) over z positions, nested pairing.
inline long long d_max_one_regular(long long m, long long z) {
    if (m < 0 || 2 * m > z) throw bad_args("d_max_one_regular requires 2m <= z");
    return m * (z - m);
}

inline long long d_max_balanced_bistar(long long n) {
    if (n < 2) throw bad_args("balanced bistar needs n >= 2");
    return (3 * (n - 1) * (n - 1) + 1 - n % 2) / 4;
}

// k-quasistar of n = 2k + l + 1 vertices: (1/2)(n - 1 - k)(3k + n).
inline long long d_max_k_quasistar(long long n, long long k) {
    if (k < 0 || n - 2 * k - 1 < 0) throw bad_args("k-quasistar requires n = 2k + l + 1, l >= 0");
    return (n - 1 - k) * (3 * k + n) / 2;
}

// Maximum D of a linear tree: the zigzag arrangement alternates between the
// lowest and highest free positions, giving floor(n^2 / 2) - 1.
inline long long d_max_linear(long long n) {
    if (n < 1) throw bad_args("n must be >= 1");
    return n == 1 ? 0 : n * n / 2 - 1;
}

// Bistar(k1): adjacent hubs of degrees k1 and n - k1. Derived from the block
// structure of an optimal arrangement (leaves split around each hub) and
// validated against the exact solvers in the test suite.
inline long long d_min_bistar(long long n, long long k1) {
    if (k1 < 1 || k1 > n - 1) throw bad_args("bistar hub degree out of range");
    long long a = k1 - 1, b = n - k1 - 1;
    return n - 1 + a * a / 4 + b * b / 4;
}

// Hubs at the two ends, each hub's leaves packed against the opposite end.
inline long long d_max_bistar(long long n, long long k1) {
    if (k1 < 1 || k1 > n - 1) throw bad_args("bistar hub degree out of range");
    long long a = k1 - 1, b = n - k1 - 1;
    return n - 1 + (a * (2 * n - 3 - a) + b * (2 * n - 3 - b)) / 2;
}

inline long long d_min_closed(const TreeClass& cls, long long n) {
    if (cls.tag == TreeTag::Star) return d_min_star(n);
    if (cls.tag == TreeTag::Linear) return d_min_linear(n);
    throw unsupported_class("no closed-form D_min for this tree class");
}

// ---------------------------------------------------------------------------
// Exact D_min solver
// ---------------------------------------------------------------------------
//
// Trees admit an optimal arrangement that is planar with every subtree in a
// contiguous block; subtree blocks then alternate around their parent in
// decreasing size order, with each block internally arranged so that its root
// leans toward the parent. The solver minimizes the resulting block cost over
// every choice of top-level root. Exactness is checked against exhaustive
// enumeration (n <= 10) and an independent branch-and-bound in the tests.

namespace detail {

struct RootedView {
    std::vector<int> order;    // preorder
    std::vector<int> parent;
    std::vector<long long> size;
    std::vector<long long> anchored;  // block cost + root offset toward parent
};

inline RootedView root_tree(const FreeTree& t, int root) {
    RootedView rv;
    rv.parent.assign(t.n, -1);
    rv.size.assign(t.n, 1);
    rv.anchored.assign(t.n, 0);
    rv.order.reserve(t.n);
    std::vector<int> stack{root};
    rv.parent[root] = root;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        rv.order.push_back(u);
        for (int w : t.adj[u])
            if (rv.parent[w] < 0) {
                rv.parent[w] = u;
                stack.push_back(w);
            }
    }
    rv.parent[root] = -1;
    return rv;
}

// Weighted cost of laying out child blocks around a vertex. Anchored blocks
// pay one extra multiple of the sizes placed on the parent side.
inline long long block_layout_cost(const std::vector<long long>& sizes_desc, bool anchored) {
    long long cost = 0;
    for (std::size_t i = 1; i <= sizes_desc.size(); ++i) {
        long long w = anchored ? static_cast<long long>(i / 2)
                               : static_cast<long long>((i - 1) / 2);
        cost += sizes_desc[i - 1] * w;
    }
    return cost;
}

inline long long minla_cost_rooted(const FreeTree& t, int root) {
    RootedView rv = root_tree(t, root);
    std::vector<std::vector<long long>> child_sizes(t.n);
    long long root_cost = 0;
    for (auto it = rv.order.rbegin(); it != rv.order.rend(); ++it) {
        int u = *it;
        auto& sizes = child_sizes[u];
        std::sort(sizes.begin(), sizes.end(), std::greater<>());
        long long children = static_cast<long long>(sizes.size());
        long long base = children + block_layout_cost(sizes, u != root);
        for (int w : t.adj[u])
            if (rv.parent[w] == u) base += rv.anchored[w];
        if (u == root) {
            root_cost = children + block_layout_cost(sizes, false);
            for (int w : t.adj[u])
                if (rv.parent[w] == u) root_cost += rv.anchored[w];
        } else {
            rv.anchored[u] = base;
            rv.size[u] = 1;
            for (int w : t.adj[u])
                if (rv.parent[w] == u) rv.size[u] += rv.size[w];
            child_sizes[rv.parent[u]].push_back(rv.size[u]);
        }
    }
    return root_cost;
}

struct MinlaPlacer {
    const FreeTree& t;
    const RootedView& rv;
    std::vector<std::vector<int>> kids;  // sorted by (size desc, id asc)
    std::vector<int>& position;

    enum class Mode { Free, ParentRight, ParentLeft };

    void place(int u, int lo, int hi, Mode mode) {
        const auto& cs = kids[u];
        std::vector<int> left, right;  // assignment order = outermost first
        for (std::size_t i = 0; i < cs.size(); ++i) {
            bool to_left = (i % 2 == 0);
            if (mode == Mode::ParentLeft) to_left = !to_left;
            (to_left ? left : right).push_back(cs[i]);
        }
        int cursor = lo;
        for (int c : left) {  // outermost first, so straight from lo
            int span = static_cast<int>(rv.size[c]);
            place(c, cursor, cursor + span - 1, Mode::ParentRight);
            cursor += span;
        }
        position[u] = cursor++;
        for (auto it = right.rbegin(); it != right.rend(); ++it) {  // innermost first
            int span = static_cast<int>(rv.size[*it]);
            place(*it, cursor, cursor + span - 1, Mode::ParentLeft);
            cursor += span;
        }
        (void)hi;
    }
};

}  // namespace detail

inline long long d_min_cost(const FreeTree& t) {
    if (t.n == 1) return 0;
    long long best = -1;
    for (int r = 0; r < t.n; ++r) {
        long long c = detail::minla_cost_rooted(t, r);
        if (best < 0 || c < best) best = c;
    }
    return best;
}

inline std::pair<long long, LinearArrangement> d_min_exact(const FreeTree& t) {
    if (t.n == 1) return {0, LinearArrangement::identity(1)};
    long long best = -1;
    int best_root = 0;
    for (int r = 0; r < t.n; ++r) {
        long long c = detail::minla_cost_rooted(t, r);
        if (best < 0 || c < best) {
            best = c;
            best_root = r;
        }
    }
    detail::RootedView rv = detail::root_tree(t, best_root);
    for (auto it = rv.order.rbegin(); it != rv.order.rend(); ++it) {
        int u = *it;
        if (rv.parent[u] >= 0) {
            rv.size[u] = 1;
            for (int w : t.adj[u])
                if (rv.parent[w] == u) rv.size[u] += rv.size[w];
        }
    }
    std::vector<std::vector<int>> kids(t.n);
    for (int v = 0; v < t.n; ++v)
        if (rv.parent[v] >= 0) kids[rv.parent[v]].push_back(v);
    for (auto& cs : kids)
        std::sort(cs.begin(), cs.end(), [&](int a, int b) {
            if (rv.size[a] != rv.size[b]) return rv.size[a] > rv.size[b];
            return a < b;
        });
    LinearArrangement arr;
    arr.position.assign(t.n, 0);
    detail::MinlaPlacer placer{t, rv, std::move(kids), arr.position};
    placer.place(best_root, 1, t.n, detail::MinlaPlacer::Mode::Free);
    return {best, arr};
}

// ---------------------------------------------------------------------------
// Exact D_max search
// ---------------------------------------------------------------------------

inline constexpr int kDefaultDmaxCap = 14;

struct DmaxOptions {
    int cap = kDefaultDmaxCap;
    // Replace the D_max >= D_rla incumbent floor by D_max >= C(n, 2).
    bool binomial_floor = false;
};

namespace detail {

struct MaxlaSolver {
    const FreeTree& t;
    int n;
    std::vector<int> pos;        // 1..n, 0 when unplaced
    std::vector<int> slot_seq;   // outside-in position order
    std::vector<int> leaf_group; // same-parent leaf symmetry class, -1 otherwise
    long long best = 0;

    explicit MaxlaSolver(const FreeTree& tree, long long floor_value)
        : t(tree), n(tree.n), pos(tree.n, 0), best(floor_value) {
        int lo = 1, hi = n;
        while (lo <= hi) {
            slot_seq.push_back(lo++);
            if (lo <= hi) slot_seq.push_back(hi--);
        }
        leaf_group.assign(n, -1);
        for (int v = 0; v < n; ++v)
            if (t.degree(v) == 1) leaf_group[v] = t.adj[v][0];
    }

    long long bound(int window_lo, int window_hi, long long placed_d) const {
        long long b = placed_d;
        for (auto [u, v] : t.edges) {
            if (pos[u] && pos[v]) continue;
            if (!pos[u] && !pos[v]) {
                b += window_hi - window_lo;
            } else {
                int p = pos[u] ? pos[u] : pos[v];
                b += std::max<long long>(window_hi - p, p - window_lo);
            }
        }
        return b;
    }

    void dfs(int depth, int window_lo, int window_hi, long long placed_d) {
        if (depth == n) {
            best = std::max(best, placed_d);
            return;
        }
        int slot = slot_seq[depth];
        for (int v = 0; v < n; ++v) {
            if (pos[v]) continue;
            // Reversal symmetry: the vertex at position 1 has the smaller id
            // of the two extreme occupants.
            if (depth == 1) {
                int at_front = 0;
                while (pos[at_front] != 1) ++at_front;
                if (v < at_front) continue;
            }
            // Leaves hanging from the same parent are interchangeable; keep
            // only the id-ordered assignment.
            if (leaf_group[v] >= 0) {
                bool skip = false;
                for (int w = 0; w < v; ++w)
                    if (!pos[w] && leaf_group[w] == leaf_group[v]) { skip = true; break; }
                if (skip) continue;
            }
            long long d = placed_d;
            for (int w : t.adj[v])
                if (pos[w]) d += std::abs(slot - pos[w]);
            pos[v] = slot;
            int lo = window_lo, hi = window_hi;
            if (slot == lo) ++lo; else --hi;
            if (bound(lo, hi, d) > best) dfs(depth + 1, lo, hi, d);
            pos[v] = 0;
        }
    }
};

}  // namespace detail

inline long long d_max_exact(const FreeTree& t, const DmaxOptions& opts = {}) {
    if (t.n > opts.cap) throw cap_exceeded("d_max_exact capped at n = " + std::to_string(opts.cap));
    if (t.n == 1) return 0;
    const long long n = t.n;
    // Any maximum is at least E[D]; start the incumbent just below the floor.
    long long floor_value = (n * n - 1) / 3;  // floor of D_rla
    if (opts.binomial_floor) floor_value = std::max(floor_value, n * (n - 1) / 2);
    detail::MaxlaSolver solver(t, floor_value - 1);
    solver.dfs(0, 1, t.n, 0);
    return solver.best;
}

// ---------------------------------------------------------------------------
// Per-tree baseline bundle
// ---------------------------------------------------------------------------

enum class Provenance { ClosedForm, Solver, Oracle };

struct BaselineBundle {
    int n = 0;
    TreeClass cls;
    Rational d_rla;
    Rational v_rla;
    long long d_min = 0;
    Provenance d_min_from = Provenance::Solver;
    std::optional<long long> d_max;
    std::optional<Provenance> d_max_from;
};

struct BaselineOptions {
    bool want_d_max = false;
    DmaxOptions d_max_opts;
};

inline BaselineBundle compute_baselines(const FreeTree& t, const BaselineOptions& opts = {}) {
    BaselineBundle b;
    b.n = t.n;
    b.cls = classify(t);
    b.d_rla = expected_D_rla(t.n);
    b.v_rla = t.n >= 2 ? variance_D_rla(t) : Rational(0);
    if (b.cls.tag == TreeTag::Star || b.cls.tag == TreeTag::Linear) {
        b.d_min = d_min_closed(b.cls, t.n);
        b.d_min_from = Provenance::ClosedForm;
    } else if (b.cls.has(TreeTag::Bistar)) {
        b.d_min = d_min_bistar(t.n, b.cls.k1);
        b.d_min_from = Provenance::ClosedForm;
    } else {
        b.d_min = d_min_cost(t);
        b.d_min_from = Provenance::Solver;
    }
    if (opts.want_d_max) {
        if (b.cls.tag == TreeTag::Linear) {
            b.d_max = d_max_linear(t.n);
            b.d_max_from = Provenance::ClosedForm;
        } else if (b.cls.has(TreeTag::KQuasistar)) {
            b.d_max = d_max_k_quasistar(t.n, b.cls.k);
            b.d_max_from = Provenance::ClosedForm;
        } else if (b.cls.has(TreeTag::Bistar)) {
            b.d_max = d_max_bistar(t.n, b.cls.k1);
            b.d_max_from = Provenance::ClosedForm;
        } else if (t.n <= opts.d_max_opts.cap) {
            b.d_max = d_max_exact(t, opts.d_max_opts);
            b.d_max_from = Provenance::Solver;
        }
    }
    return b;
}

}  // namespace ddopt
