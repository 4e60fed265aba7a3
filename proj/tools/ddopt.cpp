// ddopt: word-order optimality analysis of dependency treebanks.
//
// Subcommands: analyze, significance, trend, rank, extremal, oracle.
// All outputs are plain CSV/DOT with a schema header comment; identical
// configuration and seed give byte-identical files.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddopt/baselines.hpp"
#include "ddopt/corpus.hpp"
#include "ddopt/extremal.hpp"
#include "ddopt/scores.hpp"
#include "ddopt/stats.hpp"
#include "ddopt/tree_gen.hpp"
#include "ddopt/treebank.hpp"

namespace {

using namespace ddopt;

struct RunConfig {
    std::vector<std::string> inputs;  // LANG=PATH, or PATH (language = file stem)
    std::string format = "conllu";
    std::string dataset = "custom";
    long long replicates = 100000;
    std::uint64_t seed = 1;
    double level = 0.05;
    long long nmin = 3, nmax = 50;
    int workers = 1;
    bool no_holm = false;
    double gamma1 = 0.0, gamma2 = 0.0;
    std::string out = ".";
    int cap = 12;  // extremal alpha cap
};

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_opt(const std::optional<Rational>& r) { return r ? fmt17(r->to_double()) : ""; }

std::ofstream open_output(const RunConfig& cfg, const std::string& name,
                          const std::string& schema) {
    std::filesystem::create_directories(cfg.out);
    std::filesystem::path p = std::filesystem::path(cfg.out) / name;
    std::ofstream out(p, std::ios::binary);  // binary: identical bytes everywhere
    if (!out) throw input_error("cannot open output file " + p.string());
    out << "# schema: " << schema << "\n";
    return out;
}

std::string language_of_input(const std::string& spec, std::string* path) {
    auto eq = spec.find('=');
    if (eq != std::string::npos && eq > 0) {
        *path = spec.substr(eq + 1);
        return spec.substr(0, eq);
    }
    *path = spec;
    std::string stem = std::filesystem::path(spec).stem().string();
    return stem.empty() ? spec : stem;
}

std::vector<PreprocessedSentence> load_inputs(const RunConfig& cfg) {
    if (cfg.inputs.empty()) throw config_error("at least one --input is required");
    std::vector<PreprocessedSentence> all;
    for (const std::string& spec : cfg.inputs) {
        std::string path;
        std::string language = language_of_input(spec, &path);
        std::ifstream in(path, std::ios::binary);
        if (!in) throw input_error("cannot open input file " + path);
        if (cfg.format == "internal") {
            auto part = read_internal(in);
            all.insert(all.end(), part.begin(), part.end());
        } else {
            std::vector<RawSentence> raw =
                cfg.format == "conllu" ? parse_conllu(in) : parse_heads(in);
            auto part = preprocess_all(raw, language);
            all.insert(all.end(), part.begin(), part.end());
        }
    }
    return all;
}

std::map<std::string, Corpus> corpora_by_language(const std::vector<PreprocessedSentence>& all) {
    std::map<std::string, Corpus> by_lang;  // sorted: deterministic iteration
    for (const auto& s : all)
        by_lang[s.language].sentences.push_back(
            make_sentence(s.key, s.language, s.tree, LinearArrangement::identity(s.tree.n)));
    return by_lang;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t m = v.size();
    if (m == 0) return 0;
    return m % 2 ? v[m / 2] : (v[m / 2 - 1] + v[m / 2]) / 2;
}

std::string magnitude(double p) {
    // -log10(p) rounded to one decimal; 0.05 -> "1.3"
    double m = -std::log10(p);
    if (m <= 0) m = 0;  // avoid "-0.0" when p = 1
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", m);
    return buf;
}

// ---------------------------------------------------------------------------

int cmd_analyze(const RunConfig& cfg) {
    auto all = load_inputs(cfg);
    auto by_lang = corpora_by_language(all);
    if (by_lang.empty()) throw empty_corpus("no sentences found in the inputs");

    auto sentences_csv = open_output(cfg, "sentences.csv", "ddopt.sentences v1");
    sentences_csv << "dataset,language,sentence,n,d,d0,d_bar,root_position,omega,gamma,delta,dz,"
                     "ndd\n";
    auto languages_csv = open_output(cfg, "languages.csv", "ddopt.languages v1");
    languages_csv << "dataset,language,count,count_omega,theta,pct_omega,mean_omega,min_omega,"
                     "median_omega,max_omega,omega_all,mean_gamma,mean_delta,mean_dz,mean_ndd,"
                     "mean_d,mean_d_bar,mean_d0\n";
    auto by_length_csv = open_output(cfg, "by_length.csv", "ddopt.by_length v1");
    by_length_csv << "dataset,language,n,count,mean_omega,mean_gamma,mean_delta,mean_dz,"
                     "mean_ndd,mean_d\n";

    for (const auto& [language, corpus] : by_lang) {
        std::vector<ScoreRecord> records = score_corpus(corpus);
        long long n1 = 0, n2 = 0;
        std::vector<double> omegas;
        for (const auto& r : records) {
            if (r.n == 1) ++n1;
            if (r.n == 2) ++n2;
            if (r.omega) omegas.push_back(r.omega->to_double());
            sentences_csv << cfg.dataset << ',' << language << ',' << r.sentence_id << ',' << r.n
                          << ',' << r.d << ',' << r.d0 << ','
                          << (r.n >= 2 ? fmt17(r.d_bar.to_double()) : std::string()) << ','
                          << (r.root_position ? std::to_string(*r.root_position) : std::string())
                          << ',' << fmt_opt(r.omega) << ',' << fmt_opt(r.gamma) << ','
                          << (r.delta ? std::to_string(*r.delta) : std::string()) << ','
                          << (r.dz ? fmt17(*r.dz) : std::string()) << ','
                          << (r.ndd ? fmt17(*r.ndd) : std::string()) << '\n';
        }

        auto rows = aggregate(records, GroupBy::Language);
        const AggregateRow& row = rows.front();
        double theta = static_cast<double>(n1 + n2) / static_cast<double>(row.count);
        double omega_all = omega_all_lengths(row.mean_omega, row.count, n1, n2, cfg.gamma1,
                                             cfg.gamma2);
        double min_o = omegas.empty() ? 0 : *std::min_element(omegas.begin(), omegas.end());
        double max_o = omegas.empty() ? 0 : *std::max_element(omegas.begin(), omegas.end());
        languages_csv << cfg.dataset << ',' << language << ',' << row.count << ','
                      << row.count_omega << ',' << fmt17(theta) << ','
                      << fmt17(100.0 * row.mean_omega) << ',' << fmt17(row.mean_omega) << ','
                      << fmt17(min_o) << ',' << fmt17(median(omegas)) << ',' << fmt17(max_o)
                      << ',' << fmt17(omega_all) << ',' << fmt17(row.mean_gamma) << ','
                      << fmt17(row.mean_delta) << ',' << fmt17(row.mean_dz) << ','
                      << fmt17(row.mean_ndd) << ',' << fmt17(row.mean_d) << ','
                      << fmt17(row.mean_d_bar) << ',' << fmt17(row.mean_d0) << '\n';

        for (const auto& stratum : aggregate(records, GroupBy::LanguageAndLength)) {
            if (*stratum.n < cfg.nmin || *stratum.n > cfg.nmax) continue;
            by_length_csv << cfg.dataset << ',' << language << ',' << *stratum.n << ','
                          << stratum.count << ',' << fmt17(stratum.mean_omega) << ','
                          << fmt17(stratum.mean_gamma) << ',' << fmt17(stratum.mean_delta) << ','
                          << fmt17(stratum.mean_dz) << ',' << fmt17(stratum.mean_ndd) << ','
                          << fmt17(stratum.mean_d) << '\n';
        }
    }
    return 0;
}

int cmd_significance(const RunConfig& cfg) {
    auto all = load_inputs(cfg);
    auto by_lang = corpora_by_language(all);

    // per-language: is <Omega> significantly large?
    std::vector<std::string> langs;
    std::vector<TestResult> results;
    std::uint64_t stream = 0;
    for (const auto& [language, corpus] : by_lang) {
        langs.push_back(language);
        results.push_back(mc_significance(corpus, {}, Side::GreaterIsSignificant, cfg.replicates,
                                          cfg.seed + stream++));
    }
    std::vector<double> ps;
    for (const auto& r : results) ps.push_back(r.p_raw);
    ps = replace_zero_pvalues(ps, cfg.replicates);
    std::vector<double> qs = cfg.no_holm ? ps : holm_adjust(ps);

    auto sig_csv = open_output(cfg, "significance.csv", "ddopt.significance v1");
    sig_csv << "dataset,language,observed_mean_omega,T,F,p,p_adjusted,magnitude,significant\n";
    for (std::size_t i = 0; i < langs.size(); ++i)
        sig_csv << cfg.dataset << ',' << langs[i] << ',' << fmt17(results[i].observed) << ','
                << results[i].replicates << ',' << results[i].exceedances << ',' << fmt17(ps[i])
                << ',' << fmt17(qs[i]) << ',' << magnitude(ps[i]) << ','
                << (qs[i] <= cfg.level ? 1 : 0) << '\n';

    // anti-minimization probe: is <Omega>(n) significantly small at n = 3, 4?
    auto short_csv = open_output(cfg, "short_lengths.csv", "ddopt.short_lengths v1");
    short_csv << "dataset,language,n,observed_mean_omega,T,F,p,p_adjusted,magnitude,"
                 "significant\n";
    for (long long n : {3LL, 4LL}) {
        std::vector<std::string> row_langs;
        std::vector<TestResult> row_results;
        for (const auto& [language, corpus] : by_lang) {
            McStatistic stat;
            stat.length_stratum = n;
            try {
                row_results.push_back(mc_significance(corpus, stat, Side::SmallerIsSignificant,
                                                      cfg.replicates, cfg.seed + stream++));
                row_langs.push_back(language);
            } catch (const empty_corpus&) {
                // no sentences of this length in this language: no row
            }
        }
        std::vector<double> row_ps;
        for (const auto& r : row_results) row_ps.push_back(r.p_raw);
        row_ps = replace_zero_pvalues(row_ps, cfg.replicates);
        std::vector<double> row_qs = cfg.no_holm || row_ps.empty() ? row_ps
                                                                   : holm_adjust(row_ps);
        for (std::size_t i = 0; i < row_langs.size(); ++i)
            short_csv << cfg.dataset << ',' << row_langs[i] << ',' << n << ','
                      << fmt17(row_results[i].observed) << ',' << row_results[i].replicates << ','
                      << row_results[i].exceedances << ',' << fmt17(row_ps[i]) << ','
                      << fmt17(row_qs[i]) << ',' << magnitude(row_ps[i]) << ','
                      << (row_qs[i] <= cfg.level ? 1 : 0) << '\n';
    }
    return 0;
}

int cmd_trend(const RunConfig& cfg) {
    auto all = load_inputs(cfg);
    auto by_lang = corpora_by_language(all);

    const std::vector<std::string> score_names{"omega", "gamma", "delta", "dz", "ndd", "d"};
    auto trend_csv = open_output(cfg, "trend.csv", "ddopt.trend v1");
    trend_csv << "dataset,language,score,strata,tau,p,p_adjusted,significant\n";

    struct Row {
        std::string language, score;
        std::size_t strata;
        TestResult result;
    };
    std::vector<Row> rows;
    for (const auto& [language, corpus] : by_lang) {
        auto records = score_corpus(corpus);
        auto strata = aggregate(records, GroupBy::LanguageAndLength);
        for (const auto& score : score_names) {
            std::vector<std::pair<long long, double>> points;
            for (const auto& s : strata) {
                if (*s.n < cfg.nmin || *s.n > cfg.nmax) continue;
                double value = score == "omega"   ? s.mean_omega
                               : score == "gamma" ? s.mean_gamma
                               : score == "delta" ? s.mean_delta
                               : score == "dz"    ? s.mean_dz
                               : score == "ndd"   ? s.mean_ndd
                                                  : s.mean_d;
                points.emplace_back(*s.n, value);
            }
            if (points.size() < 3) continue;
            rows.push_back({language, score, points.size(),
                            kendall_trend_test(points, Side::GreaterIsSignificant)});
        }
    }
    // Holm per score family across languages
    for (const auto& score : score_names) {
        std::vector<std::size_t> idx;
        std::vector<double> ps;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].score == score) {
                idx.push_back(i);
                ps.push_back(rows[i].result.p_raw);
            }
        if (ps.empty()) continue;
        std::vector<double> qs = cfg.no_holm ? ps : holm_adjust(ps);
        for (std::size_t j = 0; j < idx.size(); ++j) rows[idx[j]].result.p_adjusted = qs[j];
    }
    for (const auto& r : rows)
        trend_csv << cfg.dataset << ',' << r.language << ',' << r.score << ',' << r.strata << ','
                  << fmt17(r.result.observed) << ',' << fmt17(r.result.p_raw) << ','
                  << fmt17(*r.result.p_adjusted) << ','
                  << (*r.result.p_adjusted <= cfg.level ? 1 : 0) << '\n';
    return 0;
}

int cmd_rank(const RunConfig& cfg) {
    auto all = load_inputs(cfg);
    auto by_lang = corpora_by_language(all);
    if (by_lang.size() < 2) throw config_error("ranking needs at least two languages");

    std::vector<std::string> langs;
    std::vector<double> means;
    std::vector<std::vector<double>> samples;
    for (const auto& [language, corpus] : by_lang) {
        std::vector<double> omegas;
        for (const auto& r : score_corpus(corpus))
            if (r.omega) omegas.push_back(r.omega->to_double());
        if (omegas.empty()) continue;
        double sum = 0;
        for (double w : omegas) sum += w;
        langs.push_back(language);
        means.push_back(sum / static_cast<double>(omegas.size()));
        samples.push_back(std::move(omegas));
    }
    const int L = static_cast<int>(langs.size());
    if (L < 2) throw empty_corpus("fewer than two languages have scorable sentences");

    auto means_csv = open_output(cfg, "means.csv", "ddopt.means v1");
    means_csv << "dataset,language,count_omega,mean_omega\n";
    std::vector<int> order(L);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (means[a] != means[b]) return means[a] > means[b];
        return langs[a] < langs[b];
    });
    for (int i : order)
        means_csv << cfg.dataset << ',' << langs[i] << ',' << samples[i].size() << ','
                  << fmt17(means[i]) << '\n';

    std::vector<PairwiseP> pairs;
    std::uint64_t stream = 0;
    for (int i = 0; i < L; ++i)
        for (int j = i + 1; j < L; ++j) {
            int low = means[i] <= means[j] ? i : j;
            int high = low == i ? j : i;
            Rng rng = Rng::substream(cfg.seed, 1000000 + stream++);
            TestResult t =
                pairwise_language_test(samples[low], samples[high], cfg.replicates, rng);
            pairs.push_back({low, high, t.p_raw});
        }
    std::vector<double> raw;
    for (auto& pr : pairs) raw.push_back(pr.p);
    raw = replace_zero_pvalues(raw, cfg.replicates);
    for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i].p = raw[i];

    RankResult rank = build_partial_order(langs, means, pairs, cfg.level, !cfg.no_holm);

    auto pairs_csv = open_output(cfg, "pairs.csv", "ddopt.pairs v1");
    pairs_csv << "dataset,lower_language,higher_language,p,p_adjusted,significant\n";
    for (std::size_t i = 0; i < rank.pairs.size(); ++i)
        pairs_csv << cfg.dataset << ',' << langs[rank.pairs[i].low_index] << ','
                  << langs[rank.pairs[i].high_index] << ',' << fmt17(rank.pairs[i].p) << ','
                  << fmt17(rank.adjusted[i]) << ','
                  << (rank.adjusted[i] <= cfg.level ? 1 : 0) << '\n';

    auto dot = open_output(cfg, "hasse.dot", "ddopt.hasse v1");
    dot << "// arcs: full=" << rank.order.arcs.size()
        << " reduced=" << rank.reduced.arcs.size()
        << " transitivity_violations=" << rank.transitivity_violations.size() << "\n";
    dot << hasse_dot(rank);
    return 0;
}

int cmd_extremal(const RunConfig& cfg) {
    if (cfg.nmin < 3) throw config_error("extremal analysis needs --nmin >= 3");
    if (cfg.nmax > cfg.cap)
        throw cap_exceeded("extremal --nmax exceeds --cap = " + std::to_string(cfg.cap));
    auto csv = open_output(cfg, "extremal.csv", "ddopt.extremal v1");
    csv << "n,alpha,alpha_bistar,alpha_bistar_k1,z1,witness_class,trees_examined,trees_pruned\n";
    for (long long n = cfg.nmin; n <= cfg.nmax; ++n) {
        AlphaOptions opts;
        opts.cap = cfg.cap;
        ExtremalReport rep = alpha_exact(n, opts);
        csv << n << ',' << rep.alpha.str() << ',' << rep.alpha_bistar_value.str() << ','
            << rep.alpha_bistar_k1 << ',' << rep.z1.str() << ','
            << tag_name(classify(rep.witness_tree).tag) << ',' << rep.trees_examined << ','
            << rep.trees_pruned << '\n';
    }
    return 0;
}

int cmd_oracle(const RunConfig& cfg) {
    long long hi = std::min<long long>(cfg.nmax, kEnumerationCap);
    auto csv = open_output(cfg, "oracle.csv", "ddopt.oracle v1");
    csv << "n,tree,edges,d_min,d_max,mean,variance\n";
    for (long long n = std::max<long long>(1, cfg.nmin); n <= hi; ++n) {
        int index = 0;
        generate_free_trees(static_cast<int>(n), [&](const FreeTree& t) {
            DDistribution dist = enumerate_arrangements(t);
            std::ostringstream edges;
            for (std::size_t i = 0; i < t.edges.size(); ++i) {
                if (i) edges << ' ';
                edges << t.edges[i].first << '-' << t.edges[i].second;
            }
            csv << n << ',' << index++ << ',' << edges.str() << ',' << dist.min_d << ','
                << dist.max_d << ',' << dist.mean.str() << ',' << dist.variance.str() << '\n';
        });
    }
    return 0;
}

void add_common_flags(CLI::App* sub, RunConfig& cfg, bool needs_input) {
    if (needs_input) {
        sub->add_option("--input", cfg.inputs,
                        "input file, LANG=PATH or PATH (language = file stem); repeatable")
            ->required();
        sub->add_option("--format", cfg.format, "input format")
            ->check(CLI::IsMember({"conllu", "heads", "internal"}));
        sub->add_option("--dataset", cfg.dataset, "dataset tag for output rows");
    }
    sub->add_option("-T,--replicates", cfg.replicates, "Monte Carlo replicate count")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--alpha", cfg.level, "significance level")
        ->check(CLI::Range(1e-12, 0.999999));
    sub->add_option("--nmin", cfg.nmin, "smallest sentence length / tree size");
    sub->add_option("--nmax", cfg.nmax, "largest sentence length / tree size");
    sub->add_option("--workers", cfg.workers, "worker count (results are scheduling-invariant)");
    sub->add_flag("--no-holm", cfg.no_holm, "skip the Holm correction (diagnostic only)");
    sub->add_option("--gamma1", cfg.gamma1, "Omega convention for n = 1 sentences");
    sub->add_option("--gamma2", cfg.gamma2, "Omega convention for n = 2 sentences");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--cap", cfg.cap, "exact-search size cap (extremal)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"word-order optimality analysis of dependency treebanks"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* analyze = app.add_subcommand("analyze", "score sentences and aggregate per language");
    auto* significance =
        app.add_subcommand("significance", "Monte Carlo tests of <Omega> per language");
    auto* trend = app.add_subcommand("trend", "Kendall tau trends of <Omega>(n) vs n");
    auto* rank = app.add_subcommand("rank", "pairwise tests, partial order, Hasse diagram");
    auto* extremal = app.add_subcommand("extremal", "alpha(n), alpha_bistar(n), Z1(n) tables");
    auto* oracle = app.add_subcommand("oracle", "exact enumeration dump for cross-checking");
    for (auto* sub : {analyze, significance, trend, rank}) add_common_flags(sub, cfg, true);
    for (auto* sub : {extremal, oracle}) add_common_flags(sub, cfg, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    // tree-size commands default to a smaller range than the sentence filters
    for (auto* sub : {extremal, oracle})
        if (sub->parsed() && sub->count("--nmax") == 0) cfg.nmax = 10;

    try {
        if (analyze->parsed()) return cmd_analyze(cfg);
        if (significance->parsed()) return cmd_significance(cfg);
        if (trend->parsed()) return cmd_trend(cfg);
        if (rank->parsed()) return cmd_rank(cfg);
        if (extremal->parsed()) return cmd_extremal(cfg);
        if (oracle->parsed()) return cmd_oracle(cfg);
    } catch (const cap_exceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ddopt::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 3;
}
