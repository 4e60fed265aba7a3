#include <catch2/catch_amalgamated.hpp>

#include "ddopt/extremal.hpp"
#include "ddopt/tree_gen.hpp"

using namespace ddopt;

namespace {

FreeTree path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return build_tree(n, std::move(e));
}

Rational omega_min_linear(long long n) {
    Rational d_rla = expected_D_rla(n);
    return (d_rla - Rational(d_max_linear(n))) / (d_rla - Rational(d_min_linear(n)));
}

}  // namespace

TEST_CASE("omega_min per tree") {
    for (const FreeTree& t : all_free_trees(3)) CHECK(omega_min_tree(t) == Rational(-1, 2));
    CHECK(omega_min_tree(path(4)) == Rational(-1));
    // known extremal witness: bistar n = 24, k1 = 13
    CHECK(omega_min_tree(make_bistar(24, 13)) == Rational(-613, 323));
    CHECK_THROWS_AS(omega_min_tree(path(2)), undefined_for_short);
}

TEST_CASE("omega_min is never positive and matches enumeration up to n = 8") {
    for (int n = 3; n <= 8; ++n)
        for (const FreeTree& t : all_free_trees(n)) {
            Rational w = omega_min_tree(t);
            REQUIRE(w <= Rational(0));
            DDistribution dist = enumerate_arrangements(t);
            BaselineBundle b = compute_baselines(t);
            REQUIRE(w == (b.d_rla - Rational(dist.max_d)) / (b.d_rla - Rational(dist.min_d)));
        }
}

TEST_CASE("Z1 lower bound") {
    CHECK(z1_lower_bound(3) == Rational(-1, 2));
    CHECK(z1_lower_bound(4) == Rational(-2));
    // approaches -5 from above
    CHECK(z1_lower_bound(100000) > Rational(-5));
    CHECK(Rational(-5) - z1_lower_bound(100000) < Rational(1, 1000));
    CHECK(z1_lower_bound(100000) - Rational(-5) < Rational(1, 1000));
}

TEST_CASE("alpha restricted to bistar trees") {
    auto [a24, k24] = alpha_bistar(24);
    CHECK(a24 == Rational(-613, 323));
    CHECK(k24 == 13);
    CHECK(alpha_bistar(3).first == Rational(-1, 2));
    // limit -2
    Rational a_big = alpha_bistar(10000).first;
    Rational gap = a_big - Rational(-2);
    if (gap < Rational(0)) gap = -gap;
    CHECK(gap < Rational(1, 100));
}

TEST_CASE("alpha_exact equals the exhaustive minimum for n = 3..10") {
    for (long long n = 3; n <= 10; ++n) {
        Rational exhaustive = Rational(1);
        bool first = true;
        for (const FreeTree& t : all_free_trees(static_cast<int>(n))) {
            Rational w = omega_min_tree(t);
            if (first || w < exhaustive) { exhaustive = w; first = false; }
        }
        ExtremalReport rep = alpha_exact(n);
        INFO("n = " << n);
        REQUIRE(rep.alpha == exhaustive);
        REQUIRE(rep.z1 <= rep.alpha);
        REQUIRE(rep.alpha <= rep.alpha_bistar_value);
        REQUIRE(rep.alpha <= Rational(0));
        // the witness achieves alpha
        REQUIRE(omega_min_tree(rep.witness_tree, DmaxOptions{.cap = 64}) == rep.alpha);
    }
}

TEST_CASE("witness is a bistar through n = 12 (ansatz at desk scale)") {
    for (long long n = 3; n <= 12; ++n) {
        ExtremalReport rep = alpha_exact(n);
        INFO("n = " << n);
        CHECK(classify(rep.witness_tree).has(TreeTag::Bistar));
        CHECK(rep.alpha == rep.alpha_bistar_value);
    }
}

TEST_CASE("pruning soundness: pruned equals unpruned for n = 3..10") {
    for (long long n = 3; n <= 10; ++n) {
        AlphaOptions no_prune;
        no_prune.prune = false;
        ExtremalReport a = alpha_exact(n);
        ExtremalReport b = alpha_exact(n, no_prune);
        REQUIRE(a.alpha == b.alpha);
        CHECK(b.trees_pruned == 0);
        CHECK(a.trees_pruned >= 0);
    }
}

TEST_CASE("linear trees are never the worst: alpha_bistar dominates, n = 3..200") {
    for (long long n = 3; n <= 200; ++n) {
        INFO("n = " << n);
        REQUIRE(alpha_bistar(n).first <= omega_min_linear(n));
    }
}

TEST_CASE("alpha cap") {
    CHECK_THROWS_AS(alpha_exact(13), cap_exceeded);
    AlphaOptions wide;
    wide.cap = 13;
    CHECK_NOTHROW(alpha_exact(6, wide));
    CHECK_THROWS_AS(alpha_exact(2), input_error);
}
