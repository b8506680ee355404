#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "dprf/digest.hpp"
#include "dprf/errors.hpp"
#include "dprf/metrics.hpp"

namespace dprf {

// Sampling defaults are the shared base configuration applied to every
// backend unless a manifest overrides them.
struct ChatRequest {
    std::string model_id;
    std::string prompt;  // single user message
    double temperature = 0.6;
    double top_p = 0.95;
    int max_tokens = 2000;

    void validate() const {
        if (temperature < 0.0 || temperature > 2.0) {
            throw InvalidRequest("temperature must be in [0, 2]");
        }
        if (top_p <= 0.0 || top_p > 1.0) throw InvalidRequest("top_p must be in (0, 1]");
        if (max_tokens <= 0) throw InvalidRequest("max_tokens must be positive");
    }
};

struct ChatResponse {
    std::string text;
    std::optional<long> prompt_tokens;
    std::optional<long> completion_tokens;
    int attempts_used = 1;
};

enum class EmbeddingGranularity { sentence, token };

struct EmbeddingRequest {
    std::string model_id;
    std::vector<std::string> inputs;
    EmbeddingGranularity granularity = EmbeddingGranularity::sentence;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;

    // Single attempt. Throws TransientBackendError for failures worth
    // retrying, PermanentBackendError otherwise.
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;

    // One vector per input; all vectors share the backend's dimension.
    virtual std::vector<std::vector<double>> embed_sentences(
        const std::vector<std::string>& inputs, const std::string& model_id) = 0;

    // One vector per token per input. The default runs each input's tokens
    // through embed_sentences; contextual backends may override.
    virtual std::vector<std::vector<std::vector<double>>> embed_tokens(
        const std::vector<std::string>& inputs, const std::string& model_id) {
        std::vector<std::vector<std::vector<double>>> out;
        out.reserve(inputs.size());
        for (const auto& text : inputs) {
            const auto tokens = metrics::tokenize(text).tokens;
            if (tokens.empty()) {
                out.emplace_back();
            } else {
                out.push_back(embed_sentences(tokens, model_id));
            }
        }
        return out;
    }
};

struct EmbeddingResult {
    std::vector<std::vector<double>> sentence_vectors;
    std::vector<std::vector<std::vector<double>>> token_vectors;
};

inline EmbeddingResult embed(EmbeddingBackend* backend, const EmbeddingRequest& request) {
    if (backend == nullptr) throw EmbeddingUnavailable("no embedding backend configured");
    if (request.inputs.empty()) throw InvalidRequest("embedding inputs must be nonempty");
    EmbeddingResult result;
    if (request.granularity == EmbeddingGranularity::sentence) {
        result.sentence_vectors = backend->embed_sentences(request.inputs, request.model_id);
    } else {
        result.token_vectors = backend->embed_tokens(request.inputs, request.model_id);
    }
    return result;
}

// --- retry ---

using Sleeper = std::function<void(std::chrono::milliseconds)>;

struct RetryPolicy {
    int max_attempts = 100;
    std::chrono::milliseconds base{1000};
    std::chrono::milliseconds cap{60000};
    std::uint64_t jitter_seed = 0;  // 0 = nondeterministic

    void validate() const {
        if (max_attempts < 1) throw InvalidRequest("max_attempts must be >= 1");
        if (base.count() < 0 || cap.count() < base.count()) {
            throw InvalidRequest("retry delays must satisfy 0 <= base <= cap");
        }
    }
};

// Exponential ceiling, doubled per failure, never above the cap.
inline std::chrono::milliseconds backoff_ceiling(const RetryPolicy& policy, int failures) {
    long long ms = policy.base.count();
    for (int i = 1; i < failures && ms < policy.cap.count(); ++i) ms *= 2;
    return std::chrono::milliseconds(std::min<long long>(ms, policy.cap.count()));
}

// Retries transient failures with full-jitter exponential backoff; permanent
// failures propagate untouched. attempts_used records total calls made.
inline ChatResponse chat_complete(ChatBackend& backend, const ChatRequest& request,
                                  const RetryPolicy& policy = {}, const Sleeper& sleeper = {}) {
    request.validate();
    policy.validate();
    std::mt19937_64 rng(policy.jitter_seed != 0 ? policy.jitter_seed : std::random_device{}());
    for (int attempt = 1;; ++attempt) {
        try {
            ChatResponse response = backend.complete(request);
            response.attempts_used = attempt;
            return response;
        } catch (const TransientBackendError& err) {
            if (attempt >= policy.max_attempts) {
                throw RetriesExhausted(
                    "retries exhausted after " + std::to_string(attempt) + " attempts: " + err.what(),
                    attempt);
            }
            const auto ceiling = backoff_ceiling(policy, attempt);
            std::uniform_int_distribution<long long> jitter(0, ceiling.count());
            const std::chrono::milliseconds delay(jitter(rng));
            if (sleeper) {
                sleeper(delay);
            } else {
                std::this_thread::sleep_for(delay);
            }
        }
    }
}

// --- deterministic backends for tests and sim-world ---

// Pure function of the prompt; two runs over the same prompts produce
// byte-identical transcripts.
class ScriptedChatBackend : public ChatBackend {
public:
    using Script = std::function<std::string(const std::string& prompt)>;

    explicit ScriptedChatBackend(Script script)
        : script_(std::move(script)), calls_(std::make_shared<std::atomic<int>>(0)) {}

    // Exact-prompt lookup table; unknown prompts fail permanently.
    static ScriptedChatBackend from_map(std::map<std::string, std::string> responses) {
        auto table = std::make_shared<std::map<std::string, std::string>>(std::move(responses));
        return ScriptedChatBackend([table](const std::string& prompt) {
            auto it = table->find(prompt);
            if (it == table->end()) {
                throw PermanentBackendError("scripted backend has no response for prompt");
            }
            return it->second;
        });
    }

    ChatResponse complete(const ChatRequest& request) override {
        calls_->fetch_add(1);
        ChatResponse response;
        response.text = script_(request.prompt);
        return response;
    }

    int calls() const { return calls_->load(); }

private:
    Script script_;
    std::shared_ptr<std::atomic<int>> calls_;
};

// Wraps another backend and fails the first N calls.
class FaultInjectingChatBackend : public ChatBackend {
public:
    FaultInjectingChatBackend(ChatBackend& inner, long failures, bool transient = true)
        : inner_(inner), failures_(failures), transient_(transient) {}

    static constexpr long kAlways = std::numeric_limits<long>::max();

    ChatResponse complete(const ChatRequest& request) override {
        const long call = ++calls_;
        if (call <= failures_) {
            if (transient_) throw TransientBackendError("injected transient failure", 503);
            throw PermanentBackendError("injected permanent failure", 401);
        }
        return inner_.complete(request);
    }

    long calls() const { return calls_.load(); }

private:
    ChatBackend& inner_;
    long failures_;
    bool transient_;
    std::atomic<long> calls_{0};
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

// Deterministic pseudo-embeddings: the vector for a text depends only on
// (seed, text), so equal inputs always map to equal unit vectors.
class HashEmbeddingBackend : public EmbeddingBackend {
public:
    explicit HashEmbeddingBackend(std::size_t dimension = 64, std::uint64_t seed = 1)
        : dimension_(dimension), seed_(seed) {}

    std::vector<std::vector<double>> embed_sentences(const std::vector<std::string>& inputs,
                                                     const std::string&) override {
        std::vector<std::vector<double>> out;
        out.reserve(inputs.size());
        for (const auto& text : inputs) out.push_back(vector_for(text));
        return out;
    }

    std::size_t dimension() const { return dimension_; }

private:
    std::vector<double> vector_for(const std::string& text) const {
        std::vector<double> vec(dimension_);
        const std::uint64_t base = detail::splitmix64(seed_ ^ fnv1a64(text));
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < dimension_; ++i) {
            const std::uint64_t h = detail::splitmix64(base + i);
            vec[i] = static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0) * 2.0 - 1.0;
            norm_sq += vec[i] * vec[i];
        }
        if (norm_sq == 0.0) {
            vec[0] = 1.0;
            norm_sq = 1.0;
        }
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& x : vec) x *= inv;
        return vec;
    }

    std::size_t dimension_;
    std::uint64_t seed_;
};

}  // namespace dprf
