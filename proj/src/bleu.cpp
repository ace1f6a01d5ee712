#include "autoform/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "autoform/errors.hpp"
#include "autoform/isabelle.hpp"

namespace autoform::bleu {

namespace {

struct OrderStats {
    long long matched = 0;
    long long total = 0;
};

// n-grams keyed by tokens joined with an unlikely separator byte.
std::unordered_map<std::string, int> ngram_counts(const TokenList& tokens, int n) {
    std::unordered_map<std::string, int> counts;
    if (static_cast<int>(tokens.size()) < n) {
        return counts;
    }
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key;
        for (int j = 0; j < n; ++j) {
            key += tokens[i + j];
            key.push_back('\x1f');
        }
        ++counts[key];
    }
    return counts;
}

void accumulate(const TokenList& candidate, const TokenList& reference, int max_n,
                std::vector<OrderStats>& stats, long long& cand_len, long long& ref_len) {
    cand_len += static_cast<long long>(candidate.size());
    ref_len += static_cast<long long>(reference.size());
    for (int n = 1; n <= max_n; ++n) {
        auto cand_counts = ngram_counts(candidate, n);
        auto ref_counts = ngram_counts(reference, n);
        long long total = 0;
        long long matched = 0;
        for (const auto& [gram, count] : cand_counts) {
            total += count;
            auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) {
                matched += std::min(count, it->second);
            }
        }
        stats[n - 1].matched += matched;
        stats[n - 1].total += total;
    }
}

double finalize(const std::vector<OrderStats>& stats, long long cand_len, long long ref_len) {
    double log_sum = 0.0;
    int used = 0;
    for (const auto& s : stats) {
        if (s.total == 0) {
            continue;
        }
        if (s.matched == 0) {
            return 0.0;
        }
        log_sum += std::log(static_cast<double>(s.matched) / static_cast<double>(s.total));
        ++used;
    }
    if (used == 0 || cand_len == 0 || ref_len == 0) {
        return 0.0;
    }
    const double bp =
        std::exp(std::min(0.0, 1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len)));
    return bp * std::exp(log_sum / used);
}

}  // namespace

double sentence_bleu(const TokenList& candidate, const TokenList& reference, int max_n) {
    if (max_n < 1) {
        throw Error("max_n must be at least 1");
    }
    std::vector<OrderStats> stats(max_n);
    long long cand_len = 0;
    long long ref_len = 0;
    accumulate(candidate, reference, max_n, stats, cand_len, ref_len);
    return finalize(stats, cand_len, ref_len);
}

double corpus_bleu(const std::vector<std::pair<TokenList, TokenList>>& pairs, int max_n) {
    if (pairs.empty()) {
        throw Error("corpus BLEU over an empty pair list");
    }
    if (max_n < 1) {
        throw Error("max_n must be at least 1");
    }
    std::vector<OrderStats> stats(max_n);
    long long cand_len = 0;
    long long ref_len = 0;
    for (const auto& [candidate, reference] : pairs) {
        accumulate(candidate, reference, max_n, stats, cand_len, ref_len);
    }
    return finalize(stats, cand_len, ref_len);
}

bool exact_match(const TokenList& candidate, const TokenList& reference) {
    return candidate == reference;
}

std::string Config::describe() const {
    std::string out = "bleu(max_n=" + std::to_string(max_n);
    out += variant == Variant::corpus_level ? ", variant=corpus" : ", variant=sentence_average";
    out += ", tokenizer=isabelle, smoothing=none)";
    return out;
}

CorpusScore score_corpus(const std::vector<PairInput>& inputs, const Config& config) {
    if (inputs.empty()) {
        throw Error("no candidate/reference pairs to score");
    }
    CorpusScore score;
    score.config = config;
    score.n_pairs = inputs.size();

    std::vector<std::pair<TokenList, TokenList>> pooled;
    pooled.reserve(inputs.size());
    for (const auto& input : inputs) {
        ScoredPair pair;
        pair.problem_id = input.problem_id;
        std::string lex_error;
        std::vector<isabelle::Token> toks;
        if (isabelle::try_tokenize(input.candidate_text, toks, lex_error)) {
            pair.candidate_tokens = isabelle::content_tokens(toks);
        } else {
            pair.diagnostics.push_back("candidate does not lex: " + lex_error);
        }
        if (isabelle::try_tokenize(input.reference_text, toks, lex_error)) {
            pair.reference_tokens = isabelle::content_tokens(toks);
        } else {
            pair.diagnostics.push_back("reference does not lex: " + lex_error);
        }
        if (pair.candidate_tokens.empty() || pair.reference_tokens.empty()) {
            if (pair.diagnostics.empty()) {
                pair.diagnostics.push_back("empty candidate or reference token list");
            }
            pair.sentence_bleu = 0.0;
        } else {
            pair.sentence_bleu =
                sentence_bleu(pair.candidate_tokens, pair.reference_tokens, config.max_n);
        }
        pooled.emplace_back(pair.candidate_tokens, pair.reference_tokens);
        score.pairs.push_back(std::move(pair));
    }

    if (config.variant == Variant::corpus_level) {
        score.value = corpus_bleu(pooled, config.max_n);
    } else {
        double sum = 0.0;
        for (const auto& p : score.pairs) {
            sum += p.sentence_bleu;
        }
        score.value = sum / static_cast<double>(score.pairs.size());
    }
    return score;
}

std::string format_score(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value * 100.0);
    return buf;
}

}  // namespace autoform::bleu
