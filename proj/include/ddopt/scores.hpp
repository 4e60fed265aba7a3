#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddopt/arrangement.hpp"
#include "ddopt/baselines.hpp"
#include "ddopt/errors.hpp"
#include "ddopt/rational.hpp"

namespace ddopt {

// ---------------------------------------------------------------------------
// Per-sentence scores
// ---------------------------------------------------------------------------

// Omega = (D_rla - D) / (D_rla - D_min); 1 at the optimum, 0 in expectation
// under shuffling. Undefined when D_rla = D_min (n < 3).
inline Rational omega(long long d, const Rational& d_rla, long long d_min) {
    Rational denom = d_rla - Rational(d_min);
    if (denom == Rational(0)) throw undefined_for_short("omega undefined for n < 3");
    return (d_rla - Rational(d)) / denom;
}

inline Rational gamma_score(long long d, long long d_min) {
    return Rational(d, d_min);
}

inline long long delta_score(long long d, long long d_min) { return d - d_min; }

inline double d_z(long long d, const Rational& d_rla, const Rational& v_rla) {
    if (!(v_rla > Rational(0))) throw zero_variance("D_z needs positive variance (n >= 3)");
    return (static_cast<double>(d) - d_rla.to_double()) / std::sqrt(v_rla.to_double());
}

// NDD = |log( (D/(n-1)) / sqrt(pi_root * n) )|. The log base is not fixed by
// the score's definition; natural log by default.
inline double ndd(long long d, long long n, long long root_position, double log_base = 0.0) {
    if (n < 2) throw degenerate_input("NDD needs n >= 2");
    if (root_position < 1 || root_position > n) throw bad_root("root position outside 1..n");
    double mean_len = static_cast<double>(d) / static_cast<double>(n - 1);
    double value = std::abs(std::log(mean_len / std::sqrt(static_cast<double>(root_position) * n)));
    if (log_base > 0.0) value /= std::log(log_base);
    return value;
}

// Approximation of E[NDD] under random arrangement: -log[(sqrt(2)/3)(1 + 1/n)].
inline double expected_ndd_approx(long long n) {
    if (n < 1) throw input_error("n must be >= 1");
    return -std::log(std::sqrt(2.0) / 3.0 * (1.0 + 1.0 / static_cast<double>(n)));
}

// Bounds of E[Gamma] over tree shapes: star (low) and linear tree (high).
inline std::pair<Rational, Rational> expected_gamma_bounds(long long n) {
    if (n < 2) throw input_error("n must be >= 2");
    Rational low = Rational(4, 3) * Rational(static_cast<int128>(n) * n - 1,
                                             static_cast<int128>(n) * n - n % 2);
    Rational high(n + 1, 3);
    return {low, high};
}

inline std::pair<Rational, Rational> expected_delta_bounds(long long n) {
    if (n < 2) throw input_error("n must be >= 2");
    Rational low(static_cast<int128>(n) * n - 4 + 3 * (n % 2), 12);
    Rational high(static_cast<int128>(n - 1) * (n - 2), 3);
    return {low, high};
}

// ---------------------------------------------------------------------------
// Sentence records and treebank aggregates
// ---------------------------------------------------------------------------

struct ScoreRecord {
    std::string sentence_id;
    std::string language;
    long long n = 0;
    long long d = 0;
    std::optional<long long> root_position;  // 1..n
    Rational d_bar;                          // D / (n-1), n >= 2
    long long d0 = 0;                        // D - (n-1)
    std::optional<Rational> omega;
    std::optional<Rational> gamma;
    std::optional<long long> delta;
    std::optional<double> dz;
    std::optional<double> ndd;
};

inline ScoreRecord score_sentence(const FreeTree& t, const LinearArrangement& a,
                                  const BaselineBundle& b) {
    ScoreRecord r;
    r.n = t.n;
    r.d = sum_edge_lengths(t, a);
    r.d0 = r.d - (t.n - 1);
    if (t.n >= 2) r.d_bar = Rational(r.d, t.n - 1);
    if (t.root) r.root_position = a.position[*t.root];
    if (t.n >= 2) {
        r.gamma = gamma_score(r.d, b.d_min);
        r.delta = delta_score(r.d, b.d_min);
    }
    if (t.n >= 3) {
        r.omega = omega(r.d, b.d_rla, b.d_min);
        r.dz = d_z(r.d, b.d_rla, b.v_rla);
    }
    if (t.root && t.n >= 2) r.ndd = ndd(r.d, t.n, *r.root_position);
    return r;
}

// One aggregate row: a language (optionally a length stratum) with the mean
// of every score over the sentences where that score is defined.
struct AggregateRow {
    std::string language;
    std::optional<long long> n;
    long long count = 0;          // sentences in the group
    long long count_omega = 0;    // sentences with n >= 3
    double mean_omega = 0, mean_gamma = 0, mean_delta = 0, mean_dz = 0, mean_ndd = 0;
    double mean_d = 0, mean_d_bar = 0, mean_d0 = 0;
};

enum class GroupBy { Language, LanguageAndLength };

inline std::vector<AggregateRow> aggregate(const std::vector<ScoreRecord>& records,
                                           GroupBy group_by) {
    if (records.empty()) throw empty_corpus("no records to aggregate");
    std::map<std::pair<std::string, long long>, AggregateRow> groups;
    for (const auto& r : records) {
        long long stratum = group_by == GroupBy::LanguageAndLength ? r.n : -1;
        auto& row = groups[{r.language, stratum}];
        row.language = r.language;
        if (group_by == GroupBy::LanguageAndLength) row.n = r.n;
        ++row.count;
        row.mean_d += static_cast<double>(r.d);
        if (r.n >= 2) {
            row.mean_d_bar += r.d_bar.to_double();
            row.mean_d0 += static_cast<double>(r.d0);
        }
        if (r.omega) {
            ++row.count_omega;
            row.mean_omega += r.omega->to_double();
            row.mean_dz += *r.dz;
        }
        if (r.gamma) row.mean_gamma += r.gamma->to_double();
        if (r.delta) row.mean_delta += static_cast<double>(*r.delta);
        if (r.ndd) row.mean_ndd += *r.ndd;
    }
    std::vector<AggregateRow> rows;
    for (auto& [key, row] : groups) {
        double c = static_cast<double>(row.count);
        row.mean_d /= c;
        row.mean_d_bar /= c;
        row.mean_d0 /= c;
        row.mean_gamma /= c;
        row.mean_delta /= c;
        row.mean_ndd /= c;
        if (row.count_omega > 0) {
            row.mean_omega /= static_cast<double>(row.count_omega);
            row.mean_dz /= static_cast<double>(row.count_omega);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// <Omega> extended to all sentence lengths with the gamma1/gamma2 conventions
// for n = 1 and n = 2: (1 - theta) <Omega> + (N1 g1 + N2 g2) / N.
inline double omega_all_lengths(double mean_omega, long long n_total, long long n1, long long n2,
                                double gamma1, double gamma2) {
    if (n_total < 1) throw empty_corpus("empty corpus");
    double theta = static_cast<double>(n1 + n2) / static_cast<double>(n_total);
    return (1.0 - theta) * mean_omega +
           (static_cast<double>(n1) * gamma1 + static_cast<double>(n2) * gamma2) /
               static_cast<double>(n_total);
}

}  // namespace ddopt
