#pragma once

#include <string>
#include <utility>
#include <vector>

namespace autoform::bleu {

using TokenList = std::vector<std::string>;

// BLEU-4 with brevity penalty exp(min(0, 1 - |ref|/|cand|)) and no
// smoothing: any zero clipped precision zeroes the score. Orders with no
// candidate n-grams carry no evidence and are excluded from the geometric
// mean, so identity pairs score 1 regardless of length.
double sentence_bleu(const TokenList& candidate, const TokenList& reference, int max_n = 4);

// Corpus-level pooling: clipped match and total counts and lengths are
// summed over pairs before precisions and the brevity penalty are taken.
// Throws on an empty pair list.
double corpus_bleu(const std::vector<std::pair<TokenList, TokenList>>& pairs, int max_n = 4);

bool exact_match(const TokenList& candidate, const TokenList& reference);

enum class Variant { corpus_level, sentence_average };

struct Config {
    int max_n = 4;
    Variant variant = Variant::corpus_level;

    std::string describe() const;
};

struct ScoredPair {
    std::string problem_id;
    TokenList candidate_tokens;
    TokenList reference_tokens;
    double sentence_bleu = 0.0;
    std::vector<std::string> diagnostics;
};

struct CorpusScore {
    double value = 0.0;  // in [0,1]; reports print value*100 to two decimals
    std::size_t n_pairs = 0;
    Config config;
    std::vector<ScoredPair> pairs;
};

struct PairInput {
    std::string problem_id;
    std::string candidate_text;  // scored over Isabelle content tokens
    std::string reference_text;
};

// Tokenizes both sides (unlexable candidates score 0 with a diagnostic;
// empty token lists likewise) and aggregates per `config.variant`.
CorpusScore score_corpus(const std::vector<PairInput>& inputs, const Config& config = {});

// "57.13"-style rendering of value*100 with two decimals.
std::string format_score(double value);

}  // namespace autoform::bleu
