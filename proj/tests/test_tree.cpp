#include <catch2/catch_amalgamated.hpp>

#include "ddopt/errors.hpp"
#include "ddopt/tree.hpp"

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

}  // namespace

TEST_CASE("build_tree accepts the smallest nontrivial tree") {
    FreeTree t = build_tree(3, {{0, 1}, {1, 2}});
    CHECK(t.n == 3);
    CHECK(t.degree(1) == 2);
}

TEST_CASE("build_tree rejects malformed input") {
    CHECK_THROWS_AS(build_tree(3, {{0, 1}, {0, 1}}), duplicate_edge);
    CHECK_THROWS_AS(build_tree(3, {{0, 1}, {1, 0}}), duplicate_edge);
    CHECK_THROWS_AS(build_tree(3, {{0, 1}}), wrong_edge_count);
    CHECK_THROWS_AS(build_tree(3, {{0, 1}, {0, 3}}), vertex_out_of_range);
    CHECK_THROWS_AS(build_tree(3, {{0, 1}, {2, 2}}), cycle_detected);
    // seven vertices, two components (a triangle-free forest with a cycle)
    CHECK_THROWS_AS(build_tree(7, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 6}}),
                    not_connected);
    CHECK_THROWS_AS(build_tree(3, {{0, 1}, {1, 2}}, 3), bad_root);
}

TEST_CASE("degree second moment") {
    CHECK(degree_second_moment(star(5)) == Rational(4));
    CHECK(degree_second_moment(path(4)) == Rational(5, 2));
    // direct recount oracle on an arbitrary n = 10 tree
    FreeTree t = build_tree(
        10, {{0, 1}, {0, 2}, {2, 3}, {2, 4}, {4, 5}, {4, 6}, {6, 7}, {0, 8}, {8, 9}});
    int128 sum = 0;
    for (int v = 0; v < t.n; ++v) sum += static_cast<int128>(t.degree(v)) * t.degree(v);
    CHECK(degree_second_moment(t) == Rational(sum, 10));
}

TEST_CASE("centroids of paths and stars") {
    CHECK(centroids(star(7)) == std::vector<int>{0});
    CHECK(centroids(path(5)) == std::vector<int>{2});
    CHECK(centroids(path(6)) == std::vector<int>{2, 3});
    CHECK(centroids(path(1)) == std::vector<int>{0});
}

TEST_CASE("canonical form separates the two trees on 4 vertices") {
    CHECK(canonical_form(path(4)) != canonical_form(star(4)));
    // relabelled path is isomorphic to the path
    FreeTree relabelled = build_tree(4, {{2, 0}, {0, 3}, {3, 1}});
    CHECK(canonical_form(relabelled) == canonical_form(path(4)));
}

TEST_CASE("classification of the basic families") {
    TreeClass p5 = classify(path(5));
    CHECK(p5.tag == TreeTag::Linear);
    CHECK(p5.has(TreeTag::Caterpillar));
    CHECK_FALSE(p5.has(TreeTag::Star));

    TreeClass s5 = classify(star(5));
    CHECK(s5.tag == TreeTag::Star);
    CHECK(s5.has(TreeTag::Bistar));
    CHECK(s5.k1 == 4);

    // star and linear coincide at n = 3: star wins the tie-break
    CHECK(classify(path(3)).tag == TreeTag::Star);
    CHECK(classify(path(3)).has(TreeTag::Linear));
}

TEST_CASE("bistar detection with two degree-3 hubs") {
    // hubs 0 and 1, two leaves each
    FreeTree t = build_tree(6, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}});
    TreeClass c = classify(t);
    CHECK(c.tag == TreeTag::Bistar);
    CHECK(c.k1 == 3);
    CHECK(c.has(TreeTag::Caterpillar));
    // k1 range from the class invariant
    CHECK(c.k1 >= (t.n + 1) / 2);
    CHECK(c.k1 <= t.n - 1);
}

TEST_CASE("k-quasistar detection") {
    // hub 0 with l = 2 direct leaves and k = 2 pendant 2-paths; n = 7
    FreeTree t = build_tree(7, {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {0, 5}, {5, 6}});
    TreeClass c = classify(t);
    CHECK(c.has(TreeTag::KQuasistar));
    CHECK(c.k == 2);
    CHECK(c.l == 2);
    CHECK(t.n == 2 * c.k + c.l + 1);

    // a star is a 0-quasistar
    TreeClass s = classify(star(5));
    CHECK(s.has(TreeTag::KQuasistar));
    CHECK(s.k == 0);
    CHECK(s.l == 4);
}

TEST_CASE("spider on 7 vertices is not a caterpillar family member") {
    // three pendant 2-paths from a hub: removing leaves leaves a star, not a path
    FreeTree t = build_tree(7, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 5}, {5, 6}});
    TreeClass c = classify(t);
    CHECK_FALSE(c.has(TreeTag::Caterpillar));
    CHECK(c.has(TreeTag::KQuasistar));  // k = 3, l = 0
    CHECK(c.k == 3);
}
