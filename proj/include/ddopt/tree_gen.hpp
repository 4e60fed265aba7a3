#pragma once

#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "ddopt/errors.hpp"
#include "ddopt/tree.hpp"

namespace ddopt {

namespace detail {

// Beyer-Hedetniemi successor on canonical level sequences: visits every
// unlabelled rooted tree of n vertices exactly once, in decreasing
// lexicographic order of the level sequence.
class RootedTreeSequence {
  public:
    explicit RootedTreeSequence(int n) : levels_(n) {
        for (int i = 0; i < n; ++i) levels_[i] = i;
        done_ = (n == 0);
    }

    bool done() const { return done_; }
    const std::vector<int>& levels() const { return levels_; }

    void advance() {
        int n = static_cast<int>(levels_.size());
        int p = -1;
        for (int i = n - 1; i >= 0; --i)
            if (levels_[i] >= 2) { p = i; break; }
        if (p < 0) { done_ = true; return; }
        int q = -1;
        for (int i = p - 1; i >= 0; --i)
            if (levels_[i] == levels_[p] - 1) { q = i; break; }
        for (int i = p; i < n; ++i) levels_[i] = levels_[i - (p - q)];
    }

  private:
    std::vector<int> levels_;
    bool done_ = false;
};

inline FreeTree tree_from_levels(const std::vector<int>& levels) {
    int n = static_cast<int>(levels.size());
    std::vector<std::pair<int, int>> edges;
    std::vector<int> parent_at_level(n, -1);
    parent_at_level[0] = 0;
    for (int i = 1; i < n; ++i) {
        edges.emplace_back(parent_at_level[levels[i] - 1], i);
        parent_at_level[levels[i]] = i;
    }
    return build_tree(n, std::move(edges));
}

}  // namespace detail

inline constexpr int kDefaultTreeGenCap = 20;

// Streams exactly one representative per isomorphism class of free trees on n
// vertices. Rooted trees are generated by level sequence and deduplicated with
// the centroid-rooted canonical form. Single consumer.
inline void generate_free_trees(int n, const std::function<void(const FreeTree&)>& yield,
                                int cap = kDefaultTreeGenCap) {
    if (n < 1) throw input_error("n must be >= 1");
    if (n > cap) throw cap_exceeded("free-tree generation capped at n = " + std::to_string(cap));
    std::unordered_set<std::string> seen;
    for (detail::RootedTreeSequence seq(n); !seq.done(); seq.advance()) {
        FreeTree t = detail::tree_from_levels(seq.levels());
        if (seen.insert(canonical_form(t)).second) yield(t);
    }
}

inline std::vector<FreeTree> all_free_trees(int n, int cap = kDefaultTreeGenCap) {
    std::vector<FreeTree> out;
    generate_free_trees(n, [&](const FreeTree& t) { out.push_back(t); }, cap);
    return out;
}

}  // namespace ddopt
