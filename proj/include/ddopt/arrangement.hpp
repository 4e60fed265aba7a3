#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "ddopt/errors.hpp"
#include "ddopt/rational.hpp"
#include "ddopt/rng.hpp"
#include "ddopt/tree.hpp"

namespace ddopt {

// A permutation of vertex positions: position[v] in 1..n.
struct LinearArrangement {
    std::vector<int> position;

    int n() const { return static_cast<int>(position.size()); }

    static LinearArrangement identity(int n) {
        LinearArrangement a;
        a.position.resize(n);
        std::iota(a.position.begin(), a.position.end(), 1);
        return a;
    }

    LinearArrangement reversed() const {
        LinearArrangement r = *this;
        int m = n();
        for (auto& p : r.position) p = m + 1 - p;
        return r;
    }

    bool is_permutation() const {
        std::vector<char> hit(position.size() + 1, 0);
        for (int p : position) {
            if (p < 1 || p > n() || hit[p]) return false;
            hit[p] = 1;
        }
        return true;
    }
};

// D = sum over edges of |position(u) - position(v)|.
inline long long sum_edge_lengths(const FreeTree& t, const LinearArrangement& a) {
    if (a.n() != t.n) throw size_mismatch("arrangement size does not match tree");
    long long d = 0;
    for (auto [u, v] : t.edges) d += std::abs(a.position[u] - a.position[v]);
    return d;
}

// Durstenfeld shuffle; uniform over the n! permutations, deterministic per rng
// state.
inline LinearArrangement shuffle_arrangement(int n, Rng& rng) {
    LinearArrangement a = LinearArrangement::identity(n);
    for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(a.position[i], a.position[j]);
    }
    return a;
}

// Exact distribution of D over all n! arrangements of one tree.
struct DDistribution {
    int n = 0;
    std::vector<long long> counts;  // counts[d] = number of arrangements with D = d
    Rational mean;
    Rational variance;
    long long min_d = 0, max_d = 0;
    LinearArrangement argmin, argmax;

    long long total() const {
        long long s = 0;
        for (long long c : counts) s += c;
        return s;
    }
};

inline constexpr int kEnumerationCap = 10;

// Heap's algorithm with incremental D maintenance: each step swaps two
// vertices, so only their incident edges are retouched.
inline DDistribution enumerate_arrangements(const FreeTree& t) {
    int n = t.n;
    if (n > kEnumerationCap) throw cap_exceeded("arrangement enumeration capped at n = 10");

    std::vector<int> vertex_at(n);  // index i holds the vertex placed at position i+1
    std::iota(vertex_at.begin(), vertex_at.end(), 0);
    std::vector<int> pos(n);
    std::iota(pos.begin(), pos.end(), 1);

    long long d = 0;
    for (auto [u, v] : t.edges) d += std::abs(pos[u] - pos[v]);

    DDistribution dist;
    dist.n = n;
    dist.counts.assign(static_cast<std::size_t>(n) * n + 1, 0);
    dist.min_d = dist.max_d = d;
    dist.argmin.position = dist.argmax.position = pos;

    auto record = [&](long long value) {
        ++dist.counts[static_cast<std::size_t>(value)];
        if (value < dist.min_d) {
            dist.min_d = value;
            dist.argmin.position = pos;
        }
        if (value > dist.max_d) {
            dist.max_d = value;
            dist.argmax.position = pos;
        }
    };
    record(d);

    auto swap_positions = [&](int i, int j) {
        int a = vertex_at[i], b = vertex_at[j];
        for (int w : t.adj[a])
            if (w != b) d -= std::abs(pos[a] - pos[w]);
        for (int w : t.adj[b])
            if (w != a) d -= std::abs(pos[b] - pos[w]);
        std::swap(vertex_at[i], vertex_at[j]);
        std::swap(pos[a], pos[b]);
        for (int w : t.adj[a])
            if (w != b) d += std::abs(pos[a] - pos[w]);
        for (int w : t.adj[b])
            if (w != a) d += std::abs(pos[b] - pos[w]);
    };

    std::vector<int> c(n, 0);
    int i = 0;
    while (i < n) {
        if (c[i] < i) {
            swap_positions(i % 2 == 0 ? 0 : c[i], i);
            record(d);
            ++c[i];
            i = 0;
        } else {
            c[i] = 0;
            ++i;
        }
    }

    long long total = dist.total();
    Rational sum = 0, sum_sq = 0;
    for (std::size_t value = 0; value < dist.counts.size(); ++value) {
        long long cnt = dist.counts[value];
        if (cnt == 0) continue;
        sum += Rational(static_cast<int128>(value) * cnt, 1);
        sum_sq += Rational(static_cast<int128>(value) * value * cnt, 1);
    }
    dist.mean = sum / Rational(total);
    dist.variance = sum_sq / Rational(total) - dist.mean * dist.mean;
    return dist;
}

}  // namespace ddopt
