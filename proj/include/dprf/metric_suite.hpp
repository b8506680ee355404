#pragma once

#include <string>
#include <vector>

#include "dprf/backends.hpp"
#include "dprf/core.hpp"
#include "dprf/metrics.hpp"

namespace dprf {

// Sentence-granularity similarity of two texts under the given embedder.
inline double embedding_similarity(const std::string& candidate, const std::string& reference,
                                   EmbeddingBackend* embedder, const std::string& model_id = {}) {
    if (embedder == nullptr) throw EmbeddingUnavailable("no embedding backend configured");
    const auto vectors = embedder->embed_sentences({candidate, reference}, model_id);
    if (vectors.size() != 2) throw DimensionMismatch("expected two sentence vectors");
    return metrics::cosine(vectors[0], vectors[1]);
}

struct ScoreOutcome {
    MetricVector metrics;
    std::vector<std::string> flags;  // reasons for skipped metrics
};

// Scores one (candidate, reference) pair with all three metrics. ROUGE-L is
// always computed; the embedding-backed metrics degrade to "skipped" with a
// recorded reason instead of failing the surrounding trajectory.
class MetricSuite {
public:
    MetricSuite() = default;
    MetricSuite(EmbeddingBackend* embedder, std::string model_id, metrics::WarnSink warn = {})
        : embedder_(embedder), model_id_(std::move(model_id)), warn_(std::move(warn)) {}

    ScoreOutcome score(const std::string& candidate, const std::string& reference) const {
        ScoreOutcome outcome;
        outcome.metrics.rouge_l_f1 =
            metrics::rouge_l_f1(metrics::tokenize(candidate), metrics::tokenize(reference), warn_).f1;

        if (embedder_ == nullptr) {
            outcome.flags.push_back("bertscore_f1 skipped: no embedding backend");
            outcome.flags.push_back("embedding_similarity skipped: no embedding backend");
            return outcome;
        }

        try {
            outcome.metrics.embedding_similarity =
                embedding_similarity(candidate, reference, embedder_, model_id_);
        } catch (const Error& err) {
            outcome.flags.push_back(std::string("embedding_similarity skipped: ") + err.what());
        }

        try {
            const auto token_vectors = embedder_->embed_tokens({candidate, reference}, model_id_);
            if (token_vectors.size() != 2 || token_vectors[0].empty() || token_vectors[1].empty()) {
                outcome.flags.push_back("bertscore_f1 skipped: empty token sequence");
            } else {
                outcome.metrics.bertscore_f1 =
                    metrics::bertscore_f1(token_vectors[0], token_vectors[1]).f1;
            }
        } catch (const Error& err) {
            outcome.flags.push_back(std::string("bertscore_f1 skipped: ") + err.what());
        }
        return outcome;
    }

    bool has_embedder() const { return embedder_ != nullptr; }

private:
    EmbeddingBackend* embedder_ = nullptr;
    std::string model_id_;
    metrics::WarnSink warn_;
};

}  // namespace dprf
