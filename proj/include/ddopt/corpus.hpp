#pragma once

#include <string>
#include <vector>

#include "ddopt/arrangement.hpp"
#include "ddopt/baselines.hpp"
#include "ddopt/scores.hpp"
#include "ddopt/tree.hpp"

namespace ddopt {

// One sentence ready for scoring: the tree, its observed word order and the
// precomputed baselines.
struct Sentence {
    std::string id;
    std::string language;
    FreeTree tree;
    LinearArrangement arrangement;
    BaselineBundle baselines;
};

struct Corpus {
    std::vector<Sentence> sentences;

    bool empty() const { return sentences.empty(); }
    std::size_t size() const { return sentences.size(); }
};

inline Sentence make_sentence(std::string id, std::string language, FreeTree tree,
                              LinearArrangement arr) {
    Sentence s;
    s.id = std::move(id);
    s.language = std::move(language);
    s.baselines = compute_baselines(tree);
    s.tree = std::move(tree);
    s.arrangement = std::move(arr);
    return s;
}

inline std::vector<ScoreRecord> score_corpus(const Corpus& corpus) {
    std::vector<ScoreRecord> records;
    records.reserve(corpus.size());
    for (const auto& s : corpus.sentences) {
        ScoreRecord r = score_sentence(s.tree, s.arrangement, s.baselines);
        r.sentence_id = s.id;
        r.language = s.language;
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace ddopt
