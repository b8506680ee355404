#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "dprf/errors.hpp"

namespace dprf::metrics {

using WarnSink = std::function<void(const std::string&)>;

struct TokenSequence {
    std::vector<std::string> tokens;

    bool empty() const { return tokens.empty(); }
    std::size_t size() const { return tokens.size(); }
};

// LCS inputs longer than this are truncated (debate transcripts can be long
// and the DP is quadratic).
inline constexpr std::size_t kMaxLcsTokens = 20000;

// Whitespace split, then per chunk: strip leading/trailing punctuation and
// lowercase. The rule is deliberately simple; what matters is that one
// tokenizer is used everywhere so scores are self-consistent.
inline TokenSequence tokenize(std::string_view text) {
    TokenSequence out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < n && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) {
            std::size_t begin = i;
            std::size_t end = j;
            while (begin < end && std::ispunct(static_cast<unsigned char>(text[begin]))) ++begin;
            while (end > begin && std::ispunct(static_cast<unsigned char>(text[end - 1]))) --end;
            if (end > begin) {
                std::string token;
                token.reserve(end - begin);
                for (std::size_t k = begin; k < end; ++k) {
                    token.push_back(static_cast<char>(
                        std::tolower(static_cast<unsigned char>(text[k]))));
                }
                out.tokens.push_back(std::move(token));
            }
        }
        i = j;
    }
    return out;
}

struct ScoredPair {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

namespace detail {

inline std::size_t lcs_length(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> curr(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1]) {
                curr[j] = prev[j - 1] + 1;
            } else {
                curr[j] = std::max(prev[j], curr[j - 1]);
            }
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

}  // namespace detail

// LCS-based F1. For identical precision/recall denominators the harmonic
// mean reduces to 2L/(|candidate|+|reference|), which is also exact in
// floating point, so f1 is computed that way.
inline ScoredPair rouge_l_f1(const TokenSequence& candidate, const TokenSequence& reference,
                             const WarnSink& warn = {}) {
    std::vector<std::string> cand = candidate.tokens;
    std::vector<std::string> ref = reference.tokens;
    if (cand.size() > kMaxLcsTokens) {
        cand.resize(kMaxLcsTokens);
        if (warn) warn("rouge_l_f1: candidate truncated to 20000 tokens");
    }
    if (ref.size() > kMaxLcsTokens) {
        ref.resize(kMaxLcsTokens);
        if (warn) warn("rouge_l_f1: reference truncated to 20000 tokens");
    }

    const std::size_t lcs = detail::lcs_length(cand, ref);
    ScoredPair scored;
    scored.precision = cand.empty() ? 0.0 : static_cast<double>(lcs) / static_cast<double>(cand.size());
    scored.recall = ref.empty() ? 0.0 : static_cast<double>(lcs) / static_cast<double>(ref.size());
    const std::size_t denom = cand.size() + ref.size();
    scored.f1 = (lcs == 0 || denom == 0)
                    ? 0.0
                    : 2.0 * static_cast<double>(lcs) / static_cast<double>(denom);
    return scored;
}

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size() || u.empty()) {
        throw DimensionMismatch("cosine: dimensions " + std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()));
    }
    double dot = 0.0;
    double uu = 0.0;
    double vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) throw ZeroVector("cosine: zero vector");
    return dot / (std::sqrt(uu) * std::sqrt(vv));
}

// Greedy token matching over contextless token embeddings: recall averages,
// over reference tokens, the best cosine against any candidate token;
// precision is the mirror image. No IDF weighting, no baseline rescaling.
inline ScoredPair bertscore_f1(const std::vector<std::vector<double>>& candidate_tokens,
                               const std::vector<std::vector<double>>& reference_tokens) {
    if (candidate_tokens.empty() || reference_tokens.empty()) {
        throw EmptyTokenList("bertscore_f1: empty token vector list");
    }
    const std::size_t dim = candidate_tokens.front().size();
    auto check_dims = [dim](const std::vector<std::vector<double>>& side) {
        for (const auto& vec : side) {
            if (vec.size() != dim) {
                throw DimensionMismatch("bertscore_f1: inconsistent vector dimension");
            }
        }
    };
    check_dims(candidate_tokens);
    check_dims(reference_tokens);

    auto best_against = [](const std::vector<double>& probe,
                           const std::vector<std::vector<double>>& pool) {
        double best = -1.0;
        for (const auto& other : pool) best = std::max(best, cosine(probe, other));
        return best;
    };

    double precision = 0.0;
    for (const auto& vec : candidate_tokens) precision += best_against(vec, reference_tokens);
    precision /= static_cast<double>(candidate_tokens.size());

    double recall = 0.0;
    for (const auto& vec : reference_tokens) recall += best_against(vec, candidate_tokens);
    recall /= static_cast<double>(reference_tokens.size());

    ScoredPair scored;
    scored.precision = precision;
    scored.recall = recall;
    scored.f1 = (precision + recall == 0.0) ? 0.0 : 2.0 * precision * recall / (precision + recall);
    return scored;
}

}  // namespace dprf::metrics
