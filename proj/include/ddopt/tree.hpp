#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddopt/errors.hpp"
#include "ddopt/rational.hpp"

namespace ddopt {

// An unrooted tree on n >= 1 vertices (0-based ids). The optional root marks
// the syntactic head of the sentence; it only matters for root-sensitive
// scores. Immutable after construction.
struct FreeTree {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // unordered pairs, u < v
    std::optional<int> root;
    std::vector<std::vector<int>> adj;

    int degree(int v) const { return static_cast<int>(adj[v].size()); }
};

inline FreeTree build_tree(int n, std::vector<std::pair<int, int>> edges,
                           std::optional<int> root = std::nullopt) {
    if (n < 1) throw input_error("tree needs at least one vertex");
    if (static_cast<int>(edges.size()) != n - 1)
        throw wrong_edge_count("expected " + std::to_string(n - 1) + " edges, got " +
                               std::to_string(edges.size()));
    for (auto& [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw vertex_out_of_range("edge endpoint outside [0, n)");
        if (u == v) throw cycle_detected("self-loop");
        if (u > v) std::swap(u, v);
    }
    {
        auto sorted = edges;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw duplicate_edge("duplicate edge");
    }
    if (root && (*root < 0 || *root >= n)) throw bad_root("root outside [0, n)");

    FreeTree t;
    t.n = n;
    t.edges = std::move(edges);
    t.root = root;
    t.adj.assign(n, {});
    for (auto [u, v] : t.edges) {
        t.adj[u].push_back(v);
        t.adj[v].push_back(u);
    }
    // n-1 edges and no duplicates: connectivity and acyclicity coincide.
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int w : t.adj[u])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
    }
    if (reached != n) throw not_connected("graph is not connected");
    return t;
}

// (1/n) * sum of squared vertex degrees.
inline Rational degree_second_moment(const FreeTree& t) {
    int128 sum = 0;
    for (int v = 0; v < t.n; ++v) sum += static_cast<int128>(t.degree(v)) * t.degree(v);
    return Rational(sum, t.n);
}

inline std::vector<int> centroids(const FreeTree& t) {
    // Iteratively strip leaves; the last one or two vertices standing are the
    // centroids.
    if (t.n == 1) return {0};
    std::vector<int> deg(t.n);
    std::vector<char> removed(t.n, 0);
    std::vector<int> layer;
    for (int v = 0; v < t.n; ++v) {
        deg[v] = t.degree(v);
        if (deg[v] == 1) layer.push_back(v);
    }
    int remaining = t.n;
    while (remaining > 2) {
        std::vector<int> next;
        for (int v : layer) {
            removed[v] = 1;
            --remaining;
            for (int w : t.adj[v])
                if (!removed[w] && --deg[w] == 1) next.push_back(w);
        }
        layer = std::move(next);
    }
    std::vector<int> cs;
    for (int v = 0; v < t.n; ++v)
        if (!removed[v]) cs.push_back(v);
    return cs;
}

namespace detail {

inline std::string ahu_code(const FreeTree& t, int v, int parent) {
    std::vector<std::string> child_codes;
    for (int w : t.adj[v])
        if (w != parent) child_codes.push_back(ahu_code(t, w, v));
    std::sort(child_codes.begin(), child_codes.end());
    std::string code = "(";
    for (auto& c : child_codes) code += c;
    code += ")";
    return code;
}

}  // namespace detail

// AHU encoding rooted at the centroid(s); equal strings iff isomorphic.
inline std::string canonical_form(const FreeTree& t) {
    std::string best;
    for (int c : centroids(t)) {
        std::string code = detail::ahu_code(t, c, -1);
        if (best.empty() || code < best) best = std::move(code);
    }
    return best;
}

enum class TreeTag { Star, Linear, Bistar, KQuasistar, Caterpillar, General };

inline const char* tag_name(TreeTag tag) {
    switch (tag) {
        case TreeTag::Star: return "star";
        case TreeTag::Linear: return "linear";
        case TreeTag::Bistar: return "bistar";
        case TreeTag::KQuasistar: return "k-quasistar";
        case TreeTag::Caterpillar: return "caterpillar";
        case TreeTag::General: return "general";
    }
    return "?";
}

// Tag priority: Star > Linear > Bistar > KQuasistar > Caterpillar > General.
// `all` lists every matching tag in that order; `tag` is the first.
struct TreeClass {
    TreeTag tag = TreeTag::General;
    std::vector<TreeTag> all;
    int k1 = 0;       // hub degree of a bistar
    int k = 0, l = 0; // k-quasistar parameters: n = 2k + l + 1

    bool has(TreeTag q) const { return std::find(all.begin(), all.end(), q) != all.end(); }
};

inline TreeClass classify(const FreeTree& t) {
    TreeClass cls;
    int n = t.n;
    int max_deg = 0;
    for (int v = 0; v < n; ++v) max_deg = std::max(max_deg, t.degree(v));

    bool star = (n <= 2) || (max_deg == n - 1);
    bool linear = (max_deg <= 2);

    // Bistar: two adjacent vertices cover all edges (every other vertex is a
    // leaf hanging from one of them). A star also qualifies.
    bool bistar = false;
    int k1 = 0;
    if (n == 2) {
        bistar = true;
        k1 = 1;
    }
    for (auto [u, v] : t.edges) {
        if (bistar) break;
        bool covers = true;
        for (int w = 0; w < n && covers; ++w) {
            if (w == u || w == v) continue;
            if (t.degree(w) != 1) covers = false;
            else {
                int h = t.adj[w][0];
                if (h != u && h != v) covers = false;
            }
        }
        if (covers) {
            bistar = true;
            k1 = std::max(t.degree(u), t.degree(v));
        }
    }

    // k-quasistar: a hub with l direct leaves and k pendant paths of length 2.
    bool kquasi = false;
    int qk = 0, ql = 0;
    for (int h = 0; h < n && !kquasi; ++h) {
        int kk = 0, ll = 0;
        bool ok = true;
        for (int w : t.adj[h]) {
            if (t.degree(w) == 1) ++ll;
            else if (t.degree(w) == 2) {
                int other = t.adj[w][0] == h ? t.adj[w][1] : t.adj[w][0];
                if (t.degree(other) == 1) ++kk;
                else { ok = false; break; }
            } else { ok = false; break; }
        }
        if (ok && 2 * kk + ll + 1 == n) {
            kquasi = true;
            qk = kk;
            ql = ll;
        }
    }
    if (n == 1) { kquasi = true; qk = 0; ql = 0; }

    // Caterpillar: removing every leaf leaves a path (or nothing).
    bool caterpillar = true;
    for (int v = 0; v < n && caterpillar; ++v) {
        if (t.degree(v) == 1) continue;
        int internal_neighbours = 0;
        for (int w : t.adj[v])
            if (t.degree(w) > 1) ++internal_neighbours;
        if (internal_neighbours > 2) caterpillar = false;
    }

    if (star) cls.all.push_back(TreeTag::Star);
    if (linear) cls.all.push_back(TreeTag::Linear);
    if (bistar) { cls.all.push_back(TreeTag::Bistar); cls.k1 = k1; }
    if (kquasi) { cls.all.push_back(TreeTag::KQuasistar); cls.k = qk; cls.l = ql; }
    if (caterpillar) cls.all.push_back(TreeTag::Caterpillar);
    if (cls.all.empty()) cls.all.push_back(TreeTag::General);
    cls.tag = cls.all.front();
    return cls;
}

}  // namespace ddopt
