#pragma once

#include <algorithm>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ddopt/corpus.hpp"
#include "ddopt/errors.hpp"
#include "ddopt/tree.hpp"

namespace ddopt {

// ---------------------------------------------------------------------------
// Raw sentences (pre-preprocessing)
// ---------------------------------------------------------------------------

struct RawToken {
    int id = 0;        // 1-based
    std::string form;
    std::string upos;
    int head = 0;      // 0 = root, otherwise 1-based id
    std::string deprel;
};

struct RawSentence {
    std::vector<RawToken> tokens;
    std::string doc_id;
    std::string sent_id;

    // Reparallelization key: document id + sentence id as found in metadata.
    std::string key() const { return doc_id + "\x1f" + sent_id; }
};

namespace detail {

inline void validate_heads(const RawSentence& s) {
    const int n = static_cast<int>(s.tokens.size());
    int roots = 0;
    for (const auto& t : s.tokens) {
        if (t.head < 0 || t.head > n)
            throw non_tree_heads("head " + std::to_string(t.head) + " outside 0.." +
                                 std::to_string(n));
        if (t.head == 0) ++roots;
    }
    if (roots == 0) throw non_tree_heads("no root token");
    if (roots > 1) throw multiple_roots("more than one token with head 0");
    // Walk each head chain; revisiting an unfinished vertex means a cycle.
    std::vector<int> state(n + 1, 0);  // 0 unseen, 1 on path, 2 done
    state[0] = 2;
    for (int start = 1; start <= n; ++start) {
        int v = start;
        std::vector<int> path;
        while (state[v] == 0) {
            state[v] = 1;
            path.push_back(v);
            v = s.tokens[v - 1].head;
        }
        if (state[v] == 1) throw non_tree_heads("cycle through token " + std::to_string(v));
        for (int u : path) state[u] = 2;
    }
}

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            cols.push_back(line.substr(start));
            return cols;
        }
        cols.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parsers
// ---------------------------------------------------------------------------

// Standard CoNLL-U: 10 tab-separated columns per token line, '#' comments,
// blank line ends a sentence. Multiword-token ranges ("a-b") and empty-node
// ids ("a.b") are skipped: neither contributes a vertex to the tree.
inline std::vector<RawSentence> parse_conllu(std::istream& in) {
    std::vector<RawSentence> sentences;
    RawSentence current;
    std::string doc_id;
    std::string line;
    long long line_no = 0;
    auto flush = [&]() {
        if (current.tokens.empty()) {
            current = RawSentence{};
            current.doc_id = doc_id;
            return;
        }
        for (std::size_t i = 0; i < current.tokens.size(); ++i)
            if (current.tokens[i].id != static_cast<int>(i) + 1)
                throw non_tree_heads("token ids not contiguous from 1 in sentence " +
                                     current.sent_id);
        detail::validate_heads(current);
        if (current.sent_id.empty())
            current.sent_id = std::to_string(sentences.size() + 1);
        sentences.push_back(std::move(current));
        current = RawSentence{};
        current.doc_id = doc_id;
    };
    current.doc_id = doc_id;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
            continue;
        }
        if (line[0] == '#') {
            auto meta = [&](const char* key) -> std::string {
                std::string prefix = std::string("# ") + key + " = ";
                if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
                return {};
            };
            if (auto v = meta("newdoc id"); !v.empty()) { doc_id = v; current.doc_id = v; }
            if (auto v = meta("sent_id"); !v.empty()) current.sent_id = v;
            continue;
        }
        auto cols = detail::split_tabs(line);
        if (cols.size() != 10)
            throw malformed_line(line_no, "expected 10 tab-separated columns, got " +
                                              std::to_string(cols.size()));
        const std::string& id_col = cols[0];
        if (id_col.find('-') != std::string::npos || id_col.find('.') != std::string::npos)
            continue;  // multiword-token range / empty node: not a tree vertex
        RawToken tok;
        try {
            tok.id = std::stoi(id_col);
            tok.head = std::stoi(cols[6]);
        } catch (const std::exception&) {
            throw malformed_line(line_no, "non-numeric ID or HEAD column");
        }
        tok.form = cols[1];
        tok.upos = cols[3];
        tok.deprel = cols[7];
        current.tokens.push_back(std::move(tok));
    }
    flush();
    return sentences;
}

// Stripped format: one sentence per non-empty line, a whitespace-separated
// head vector. Forms and tags are empty.
inline std::vector<RawSentence> parse_heads(std::istream& in) {
    std::vector<RawSentence> sentences;
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream row(line);
        RawSentence s;
        std::string field;
        int id = 0;
        while (row >> field) {
            RawToken tok;
            tok.id = ++id;
            try {
                std::size_t used = 0;
                tok.head = std::stoi(field, &used);
                if (used != field.size()) throw std::invalid_argument(field);
            } catch (const std::exception&) {
                throw malformed_line(line_no, "non-numeric head '" + field + "'");
            }
            s.tokens.push_back(std::move(tok));
        }
        if (s.tokens.empty()) continue;
        detail::validate_heads(s);
        s.sent_id = std::to_string(line_no);
        sentences.push_back(std::move(s));
    }
    return sentences;
}

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

struct PreprocessOptions {
    // Tokens with these upos tags are deleted. HamleDT-style null elements
    // vary per treebank, so the predicate is configurable; forms matching
    // any of the regex patterns are deleted too.
    std::set<std::string> delete_upos{"PUNCT"};
    std::vector<std::string> delete_form_patterns;
};

// Delete punctuation/null tokens, reattach orphans to their nearest surviving
// ancestor, renumber the survivors preserving order. If the root itself dies,
// the leftmost surviving token whose ancestors were all deleted becomes the
// new root and absorbs the other such tokens. No dummy root is added.
inline FreeTree preprocess(const RawSentence& s, const PreprocessOptions& opts = {}) {
    const int n = static_cast<int>(s.tokens.size());
    std::vector<std::regex> patterns;
    patterns.reserve(opts.delete_form_patterns.size());
    for (const auto& p : opts.delete_form_patterns) patterns.emplace_back(p);

    std::vector<char> deleted(n + 1, 0);
    for (const auto& t : s.tokens) {
        bool kill = opts.delete_upos.count(t.upos) > 0;
        for (const auto& re : patterns)
            if (!kill && std::regex_match(t.form, re)) kill = true;
        if (kill) deleted[t.id] = 1;
    }

    std::vector<int> new_id(n + 1, 0);
    int kept = 0;
    for (int id = 1; id <= n; ++id)
        if (!deleted[id]) new_id[id] = ++kept;
    if (kept == 0) throw all_tokens_deleted("every token matched the deletion predicate");

    // Nearest surviving ancestor (0 if the whole chain up to the root died).
    auto surviving_head = [&](int id) {
        int h = s.tokens[id - 1].head;
        while (h != 0 && deleted[h]) h = s.tokens[h - 1].head;
        return h;
    };

    int new_root_old_id = 0;  // leftmost survivor with no surviving ancestor
    std::vector<std::pair<int, int>> heads;  // (new id, new head or 0)
    for (int id = 1; id <= n; ++id) {
        if (deleted[id]) continue;
        int h = surviving_head(id);
        if (h == 0) {
            if (new_root_old_id == 0) new_root_old_id = id;
            heads.emplace_back(new_id[id], new_id[new_root_old_id]);  // self-edge for the root
        } else {
            heads.emplace_back(new_id[id], new_id[h]);
        }
    }

    std::vector<std::pair<int, int>> edges;
    edges.reserve(kept - 1);
    for (auto [v, h] : heads)
        if (v != h) edges.emplace_back(v - 1, h - 1);
    FreeTree tree = build_tree(kept, std::move(edges));
    tree.root = new_id[new_root_old_id] - 1;
    return tree;
}

// ---------------------------------------------------------------------------
// Corpus assembly
// ---------------------------------------------------------------------------

struct PreprocessedSentence {
    std::string key;       // doc id + sent id
    std::string language;
    FreeTree tree;
};

inline std::vector<PreprocessedSentence> preprocess_all(const std::vector<RawSentence>& raw,
                                                        const std::string& language,
                                                        const PreprocessOptions& opts = {}) {
    std::vector<PreprocessedSentence> out;
    out.reserve(raw.size());
    for (const auto& s : raw) {
        PreprocessedSentence p;
        p.key = s.key();
        p.language = language;
        try {
            p.tree = preprocess(s, opts);
        } catch (const all_tokens_deleted&) {
            continue;  // nothing survives: the sentence drops out of the corpus
        }
        out.push_back(std::move(p));
    }
    return out;
}

// Concatenate treebanks of one language, order preserved; no deduplication.
inline std::vector<PreprocessedSentence> merge_language(
    const std::vector<std::vector<PreprocessedSentence>>& treebanks) {
    if (treebanks.empty()) throw empty_corpus("no treebanks to merge");
    const std::string& language = treebanks.front().empty() ? std::string()
                                                            : treebanks.front().front().language;
    std::vector<PreprocessedSentence> merged;
    for (const auto& tb : treebanks)
        for (const auto& s : tb) {
            if (!merged.empty() && s.language != merged.front().language)
                throw mixed_languages("cannot merge '" + s.language + "' into '" +
                                      merged.front().language + "'");
            merged.push_back(s);
        }
    if (!merged.empty() && !language.empty() && merged.front().language != language)
        throw mixed_languages("language mismatch");
    return merged;
}

// Keep exactly the sentence keys that survive (with n >= 3) in every language.
inline std::vector<std::vector<PreprocessedSentence>> reparallelize(
    const std::vector<std::vector<PreprocessedSentence>>& collection) {
    if (collection.empty()) throw empty_corpus("empty parallel collection");
    std::map<std::string, int> alive;
    for (const auto& corpus : collection) {
        std::set<std::string> keys;
        for (const auto& s : corpus)
            if (s.tree.n >= 3) keys.insert(s.key);
        for (const auto& k : keys) ++alive[k];
    }
    const int langs = static_cast<int>(collection.size());
    std::set<std::string> common;
    for (const auto& [k, c] : alive)
        if (c == langs) common.insert(k);
    if (common.empty()) throw no_common_sentences("no sentence survives in every language");
    std::vector<std::vector<PreprocessedSentence>> out;
    out.reserve(collection.size());
    for (const auto& corpus : collection) {
        std::vector<PreprocessedSentence> kept;
        for (const auto& s : corpus)
            if (common.count(s.key)) kept.push_back(s);
        out.push_back(std::move(kept));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Theta statistics
// ---------------------------------------------------------------------------

struct CorpusMeta {
    std::string language;
    std::string family;
    std::string dataset;
    long long n_total = 0;  // N
    long long n1 = 0;       // N1: sentences of length 1
    long long n2 = 0;       // N2: sentences of length 2
    double theta = 0;       // (N1 + N2) / N
};

inline CorpusMeta theta_stats(const std::vector<PreprocessedSentence>& corpus) {
    CorpusMeta meta;
    if (!corpus.empty()) meta.language = corpus.front().language;
    meta.n_total = static_cast<long long>(corpus.size());
    for (const auto& s : corpus) {
        if (s.tree.n == 1) ++meta.n1;
        else if (s.tree.n == 2) ++meta.n2;
    }
    meta.theta = meta.n_total > 0
                     ? static_cast<double>(meta.n1 + meta.n2) / static_cast<double>(meta.n_total)
                     : 0.0;
    return meta;
}

// ---------------------------------------------------------------------------
// Internal corpus serialization
// ---------------------------------------------------------------------------

inline constexpr const char* kInternalFormatHeader = "#ddopt-corpus v1";

// One sentence per line: language, sentence key, root (1-based), then the
// head vector (0 = root). Tab-separated; header line carries the version.
inline void write_internal(std::ostream& out,
                           const std::vector<PreprocessedSentence>& corpus) {
    out << kInternalFormatHeader << "\n";
    for (const auto& s : corpus) {
        out << s.language << '\t' << s.key << '\t'
            << (s.tree.root ? *s.tree.root + 1 : 0);
        // BFS from the root orients every edge and recovers the head vector.
        std::vector<int> head(s.tree.n, 0);
        int root = s.tree.root ? *s.tree.root : 0;
        std::vector<int> order{root};
        std::vector<char> seen(s.tree.n, 0);
        seen[root] = 1;
        for (std::size_t i = 0; i < order.size(); ++i)
            for (int nb : s.tree.adj[order[i]])
                if (!seen[nb]) {
                    seen[nb] = 1;
                    head[nb] = order[i] + 1;
                    order.push_back(nb);
                }
        out << '\t';
        for (int v = 0; v < s.tree.n; ++v) {
            if (v) out << ' ';
            out << head[v];
        }
        out << '\n';
    }
}

inline std::vector<PreprocessedSentence> read_internal(std::istream& in) {
    std::string line;
    long long line_no = 0;
    if (!std::getline(in, line)) throw input_error("empty internal corpus");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kInternalFormatHeader)
        throw input_error("unrecognized internal corpus header '" + line + "'");
    std::vector<PreprocessedSentence> corpus;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cols = detail::split_tabs(line);
        if (cols.size() != 4) throw malformed_line(line_no, "expected 4 tab-separated fields");
        PreprocessedSentence s;
        s.language = cols[0];
        s.key = cols[1];
        RawSentence raw;
        std::istringstream row(cols[3]);
        int h = 0, id = 0;
        while (row >> h) {
            RawToken tok;
            tok.id = ++id;
            tok.head = h;
            raw.tokens.push_back(tok);
        }
        if (raw.tokens.empty()) throw malformed_line(line_no, "empty head vector");
        detail::validate_heads(raw);
        std::vector<std::pair<int, int>> edges;
        for (const auto& tok : raw.tokens)
            if (tok.head != 0) edges.emplace_back(tok.id - 1, tok.head - 1);
        s.tree = build_tree(id, std::move(edges));
        int root = std::stoi(cols[2]);
        if (root < 1 || root > id) throw malformed_line(line_no, "root outside 1..n");
        s.tree.root = root - 1;
        corpus.push_back(std::move(s));
    }
    return corpus;
}

// A preprocessed corpus scored in its observed (identity) word order.
inline Corpus to_corpus(const std::vector<PreprocessedSentence>& sentences) {
    Corpus c;
    c.sentences.reserve(sentences.size());
    for (const auto& s : sentences)
        c.sentences.push_back(
            make_sentence(s.key, s.language, s.tree, LinearArrangement::identity(s.tree.n)));
    return c;
}

}  // namespace ddopt
