#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "ddopt/tree_gen.hpp"

using namespace ddopt;

namespace {

// Independent oracle: count free-tree isomorphism classes by decoding every
// Pruefer sequence (all n^(n-2) labelled trees) and deduplicating.
std::size_t free_tree_count_by_pruefer(int n) {
    if (n <= 2) return 1;
    std::set<std::string> classes;
    std::vector<int> code(n - 2, 0);
    while (true) {
        std::vector<int> degree(n, 1);
        for (int v : code) ++degree[v];
        std::vector<std::pair<int, int>> edges;
        std::vector<int> deg = degree;
        std::set<int> leaves;
        for (int v = 0; v < n; ++v)
            if (deg[v] == 1) leaves.insert(v);
        for (int v : code) {
            int leaf = *leaves.begin();
            leaves.erase(leaves.begin());
            edges.emplace_back(leaf, v);
            if (--deg[v] == 1) leaves.insert(v);
        }
        int a = *leaves.begin(), b = *std::next(leaves.begin());
        edges.emplace_back(a, b);
        classes.insert(canonical_form(build_tree(n, std::move(edges))));

        int i = n - 3;
        while (i >= 0 && code[i] == n - 1) code[i--] = 0;
        if (i < 0) break;
        ++code[i];
    }
    return classes.size();
}

}  // namespace

TEST_CASE("free tree counts match the known sequence") {
    const std::vector<std::pair<int, std::size_t>> expected{
        {1, 1}, {2, 1}, {3, 1}, {4, 2}, {5, 3}, {6, 6}, {7, 11}, {8, 23}, {9, 47}, {10, 106}};
    for (auto [n, count] : expected) {
        INFO("n = " << n);
        CHECK(all_free_trees(n).size() == count);
    }
}

TEST_CASE("generated trees validate and are pairwise non-isomorphic") {
    for (int n = 1; n <= 10; ++n) {
        std::set<std::string> forms;
        generate_free_trees(n, [&](const FreeTree& t) {
            REQUIRE(t.n == n);
            REQUIRE(static_cast<int>(t.edges.size()) == n - 1);  // passed build_tree
            CHECK(forms.insert(canonical_form(t)).second);
        });
        CHECK(static_cast<int>(forms.size()) == static_cast<int>(all_free_trees(n).size()));
    }
}

TEST_CASE("generation agrees with the Pruefer dedup oracle") {
    for (int n = 3; n <= 8; ++n) {
        INFO("n = " << n);
        CHECK(all_free_trees(n).size() == free_tree_count_by_pruefer(n));
    }
}

TEST_CASE("cap is enforced") {
    CHECK_THROWS_AS(all_free_trees(21), cap_exceeded);
    CHECK_THROWS_AS(all_free_trees(15, 14), cap_exceeded);
    CHECK_NOTHROW(all_free_trees(5, 5));
}
