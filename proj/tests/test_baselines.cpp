#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "ddopt/baselines.hpp"
#include "ddopt/tree_gen.hpp"

using namespace ddopt;

namespace {

FreeTree path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return build_tree(n, std::move(e));
}

FreeTree star(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i < n; ++i) e.emplace_back(0, i);
    return build_tree(n, std::move(e));
}

FreeTree bistar(int n, int k1) {
    // hub 0 with k1 - 1 leaves plus hub 1; hub 1 with the remaining leaves
    std::vector<std::pair<int, int>> e{{0, 1}};
    for (int v = 2; v <= k1; ++v) e.emplace_back(0, v);
    for (int v = k1 + 1; v < n; ++v) e.emplace_back(1, v);
    return build_tree(n, std::move(e));
}

FreeTree example_sentence_tree() {
    std::vector<int> heads{2, 4, 4, 0, 7, 7, 4};
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 7; ++i)
        if (heads[i] != 0) e.emplace_back(i, heads[i] - 1);
    return build_tree(7, std::move(e), 3);
}

// Independent MinLA oracle: branch-and-bound that fills positions 1..n left
// to right. Lower bound: every half-placed edge must at least reach the next
// free position; every unplaced edge costs at least 1.
struct MinlaBnB {
    const FreeTree& t;
    std::vector<int> pos;
    long long best;

    explicit MinlaBnB(const FreeTree& tree) : t(tree), pos(tree.n, 0) {
        best = 0;  // greedy warm start: identity
        for (auto [u, v] : t.edges) best += std::abs(u - v);
    }

    long long lower_bound(int next_slot, long long placed) const {
        long long b = placed;
        for (auto [u, v] : t.edges) {
            if (pos[u] && pos[v]) continue;
            if (!pos[u] && !pos[v]) b += 1;
            else b += next_slot - (pos[u] ? pos[u] : pos[v]);
        }
        return b;
    }

    void dfs(int slot, long long placed) {
        if (slot > t.n) {
            best = std::min(best, placed);
            return;
        }
        for (int v = 0; v < t.n; ++v) {
            if (pos[v]) continue;
            // reversal symmetry: vertex 0 stays in the left half
            if (v == 0 && slot > (t.n + 1) / 2) continue;
            long long d = placed;
            for (int w : t.adj[v])
                if (pos[w]) d += slot - pos[w];
            pos[v] = slot;
            if (lower_bound(slot + 1, d) < best) dfs(slot + 1, d);
            pos[v] = 0;
        }
    }

    long long solve() {
        dfs(1, 0);
        return best;
    }
};

}  // namespace

TEST_CASE("expected D under random arrangement") {
    CHECK(expected_D_rla(7) == Rational(16));
    CHECK(expected_D_rla(6) == Rational(35, 3));
    CHECK(expected_D_rla(1) == Rational(0));
}

TEST_CASE("variance of D: hand cases") {
    CHECK(variance_D_rla(star(3)) == Rational(2, 9));
    CHECK(variance_D_rla(path(2)) == Rational(0));
    CHECK_THROWS_AS(variance_D_rla(path(1)), degenerate_input);
}

TEST_CASE("variance and mean of D match enumeration for every tree up to n = 8") {
    for (int n = 3; n <= 8; ++n)
        for (const FreeTree& t : all_free_trees(n)) {
            DDistribution dist = enumerate_arrangements(t);
            REQUIRE(variance_D_rla(t) == dist.variance);
            REQUIRE(expected_D_rla(n) == dist.mean);
        }
}

TEST_CASE("closed-form D_min for stars and paths") {
    CHECK(d_min_closed(classify(star(5)), 5) == 6);
    CHECK(d_min_closed(classify(star(4)), 4) == 4);
    CHECK(d_min_closed(classify(path(7)), 7) == 6);
    FreeTree general = example_sentence_tree();
    CHECK_THROWS_AS(d_min_closed(classify(general), 7), unsupported_class);
}

TEST_CASE("d_min_exact on the running example and the basic families") {
    auto [d, arr] = d_min_exact(example_sentence_tree());
    CHECK(d == 8);
    CHECK(arr.is_permutation());
    CHECK(sum_edge_lengths(example_sentence_tree(), arr) == 8);
    for (int n = 2; n <= 12; ++n) {
        CHECK(d_min_exact(path(n)).first == n - 1);
        CHECK(d_min_exact(star(n)).first == d_min_star(n));
    }
    CHECK(d_min_exact(star(5)).first == 6);
}

TEST_CASE("d_min_exact equals the enumeration minimum for every tree up to n = 9") {
    for (int n = 1; n <= 9; ++n)
        for (const FreeTree& t : all_free_trees(n)) {
            DDistribution dist = enumerate_arrangements(t);
            auto [d, arr] = d_min_exact(t);
            REQUIRE(d == dist.min_d);
            REQUIRE(arr.is_permutation());
            REQUIRE(sum_edge_lengths(t, arr) == d);
        }
}

TEST_CASE("d_min_exact agrees with an independent branch-and-bound up to n = 11") {
    for (int n = 10; n <= 11; ++n)
        for (const FreeTree& t : all_free_trees(n)) {
            REQUIRE(d_min_exact(t).first == MinlaBnB(t).solve());
        }
}

TEST_CASE("d_max closed forms: plug-in examples") {
    CHECK(d_max_star(4, 5) == 10);
    CHECK(d_max_star(1, 2) == 1);
    CHECK(d_max_star(4, 7) == 18);
    CHECK_THROWS_AS(d_max_star(5, 5), bad_args);

    CHECK(d_max_one_regular(2, 5) == 6);
    CHECK(d_max_one_regular(1, 2) == 1);
    CHECK(d_max_one_regular(2, 6) == 8);
    CHECK_THROWS_AS(d_max_one_regular(4, 7), bad_args);

    CHECK(d_max_balanced_bistar(4) == 7);
    // (1/4)[3(n-1)^2 + 1 - n mod 2] at n = 24; the slightly unbalanced
    // bistar with k1 = 13 reaches 396 (checked below)
    CHECK(d_max_balanced_bistar(24) == 397);
    CHECK(d_max_balanced_bistar(2) == 1);

    CHECK(d_max_k_quasistar(5, 0) == 10);
    CHECK(d_max_k_quasistar(7, 2) == 26);
    CHECK(d_max_k_quasistar(9, 1) == 42);
    CHECK_THROWS_AS(d_max_k_quasistar(5, 3), bad_args);
}

TEST_CASE("k-quasistar maximum dominates its decomposition by exactly l") {
    for (int n = 3; n <= 15; ++n)
        for (int k = 1; 2 * k + 1 <= n; ++k) {  // k = 0 degenerates to a plain star
            long long l = n - 2 * k - 1;
            long long decomposition = d_max_star(l + k, n - 1) + d_max_one_regular(k, n);
            CHECK(d_max_k_quasistar(n, k) - decomposition == l);
        }
}

TEST_CASE("d_max_exact: examples and enumeration equality up to n = 9") {
    CHECK(d_max_exact(path(4)) == 7);
    CHECK(d_max_exact(star(5)) == 10);
    for (int n = 2; n <= 9; ++n)
        for (const FreeTree& t : all_free_trees(n)) {
            DDistribution dist = enumerate_arrangements(t);
            REQUIRE(d_max_exact(t) == dist.max_d);
        }
    CHECK_THROWS_AS(d_max_exact(path(15)), cap_exceeded);
    DmaxOptions wide{.cap = 15};
    CHECK(d_max_exact(path(15), wide) == d_max_linear(15));
}

TEST_CASE("binomial floor toggle leaves results unchanged") {
    DmaxOptions with{.binomial_floor = true};
    for (const FreeTree& t : all_free_trees(8))
        CHECK(d_max_exact(t, with) == d_max_exact(t));
}

TEST_CASE("derived bistar closed forms match the exact solvers") {
    for (int n = 3; n <= 12; ++n)
        for (int k1 = (n + 1) / 2; k1 <= n - 1; ++k1) {
            FreeTree t = bistar(n, k1);
            INFO("n = " << n << ", k1 = " << k1);
            REQUIRE(d_min_bistar(n, k1) == d_min_exact(t).first);
            REQUIRE(d_max_bistar(n, k1) == d_max_exact(t));
        }
    // known extremal witness at n = 24
    CHECK(d_min_bistar(24, 13) == 84);
    CHECK(d_max_bistar(24, 13) == 396);
}

TEST_CASE("d_max_linear matches enumeration") {
    for (int n = 2; n <= 10; ++n)
        CHECK(d_max_linear(n) == enumerate_arrangements(path(n)).max_d);
}

TEST_CASE("sandwich inequality holds for every tree up to n = 9") {
    for (int n = 2; n <= 9; ++n) {
        Rational d_rla = expected_D_rla(n);
        for (const FreeTree& t : all_free_trees(n)) {
            BaselineOptions opts;
            opts.want_d_max = true;
            BaselineBundle b = compute_baselines(t, opts);
            REQUIRE(b.d_min >= n - 1);
            REQUIRE(Rational(b.d_min) <= Rational(static_cast<int128>(n) * n / 4));
            REQUIRE(Rational(static_cast<int128>(n) * n / 4) <= d_rla);
            REQUIRE(b.d_max.has_value());
            REQUIRE(d_rla <= Rational(*b.d_max));
            REQUIRE(*b.d_max <= d_max_balanced_bistar(n));
        }
    }
}

TEST_CASE("baseline bundle provenance: closed forms where available") {
    BaselineOptions opts;
    opts.want_d_max = true;
    CHECK(compute_baselines(star(6), opts).d_min_from == Provenance::ClosedForm);
    CHECK(compute_baselines(path(6), opts).d_min_from == Provenance::ClosedForm);
    CHECK(compute_baselines(bistar(7, 4), opts).d_min_from == Provenance::ClosedForm);
    BaselineBundle general = compute_baselines(example_sentence_tree(), opts);
    CHECK(general.d_min_from == Provenance::Solver);
    CHECK(general.d_min == 8);
    // D_max beyond the cap is reported absent, not wrong
    BaselineOptions small;
    small.want_d_max = true;
    small.d_max_opts.cap = 6;
    FreeTree big = example_sentence_tree();
    CHECK_FALSE(compute_baselines(big, small).d_max.has_value());
}
