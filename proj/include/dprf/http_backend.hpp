#pragma once

#include <chrono>
#include <cstdlib>
#include <string>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "dprf/backends.hpp"
#include "dprf/errors.hpp"

namespace dprf {

// Connection settings for an OpenAI-compatible HTTP endpoint. The API key is
// never stored in manifests; only the name of the environment variable is.
struct HttpEndpoint {
    std::string base_url;  // e.g. http://localhost:8000/v1
    std::string api_key;
    std::chrono::seconds timeout{120};
};

inline std::string read_api_key_env(const std::string& variable) {
    if (variable.empty()) return "";
    const char* value = std::getenv(variable.c_str());
    return value != nullptr ? std::string(value) : std::string();
}

namespace detail {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path prefix without trailing slash
};

inline SplitUrl split_base_url(const std::string& base_url) {
    const std::size_t scheme = base_url.find("://");
    if (scheme == std::string::npos) {
        throw InvalidRequest("base_url must include a scheme: " + base_url);
    }
    const std::size_t path = base_url.find('/', scheme + 3);
    SplitUrl out;
    if (path == std::string::npos) {
        out.origin = base_url;
    } else {
        out.origin = base_url.substr(0, path);
        out.prefix = base_url.substr(path);
    }
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
    return out;
}

inline bool transient_status(int status) {
    return status == 408 || status == 429 || status >= 500;
}

inline nlohmann::json post_json(const HttpEndpoint& endpoint, const std::string& path,
                                const nlohmann::json& body) {
    const SplitUrl url = split_base_url(endpoint.base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(endpoint.timeout);
    client.set_read_timeout(endpoint.timeout);
    client.set_write_timeout(endpoint.timeout);

    httplib::Headers headers;
    if (!endpoint.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + endpoint.api_key);
    }
    auto res = client.Post(url.prefix + path, headers, body.dump(), "application/json");
    if (!res) {
        throw TransientBackendError("connection failure: " + httplib::to_string(res.error()));
    }
    if (transient_status(res->status)) {
        throw TransientBackendError("HTTP " + std::to_string(res->status), res->status);
    }
    if (res->status != 200) {
        throw PermanentBackendError("HTTP " + std::to_string(res->status) + ": " + res->body,
                                    res->status);
    }
    try {
        return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& ex) {
        throw PermanentBackendError(std::string("malformed JSON response: ") + ex.what());
    }
}

}  // namespace detail

// POST {base_url}/chat/completions with a single user message.
class HttpChatBackend : public ChatBackend {
public:
    explicit HttpChatBackend(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

    ChatResponse complete(const ChatRequest& request) override {
        nlohmann::json body = {
            {"model", request.model_id},
            {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
            {"temperature", request.temperature},
            {"top_p", request.top_p},
            {"max_tokens", request.max_tokens},
        };
        const nlohmann::json payload = detail::post_json(endpoint_, "/chat/completions", body);

        ChatResponse response;
        try {
            response.text = payload.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& ex) {
            throw PermanentBackendError(std::string("unexpected completion shape: ") + ex.what());
        }
        if (payload.contains("usage") && payload["usage"].is_object()) {
            const auto& usage = payload["usage"];
            if (usage.contains("prompt_tokens") && usage["prompt_tokens"].is_number()) {
                response.prompt_tokens = usage["prompt_tokens"].get<long>();
            }
            if (usage.contains("completion_tokens") && usage["completion_tokens"].is_number()) {
                response.completion_tokens = usage["completion_tokens"].get<long>();
            }
        }
        return response;
    }

private:
    HttpEndpoint endpoint_;
};

// POST {base_url}/embeddings with model and input list.
class HttpEmbeddingBackend : public EmbeddingBackend {
public:
    explicit HttpEmbeddingBackend(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

    std::vector<std::vector<double>> embed_sentences(const std::vector<std::string>& inputs,
                                                     const std::string& model_id) override {
        nlohmann::json body = {{"model", model_id}, {"input", inputs}};
        const nlohmann::json payload = detail::post_json(endpoint_, "/embeddings", body);

        std::vector<std::vector<double>> vectors(inputs.size());
        try {
            const auto& data = payload.at("data");
            if (data.size() != inputs.size()) {
                throw PermanentBackendError("embedding response size mismatch");
            }
            for (std::size_t i = 0; i < data.size(); ++i) {
                const auto& item = data[i];
                const std::size_t index =
                    item.contains("index") ? item["index"].get<std::size_t>() : i;
                if (index >= vectors.size()) {
                    throw PermanentBackendError("embedding index out of range");
                }
                vectors[index] = item.at("embedding").get<std::vector<double>>();
            }
        } catch (const nlohmann::json::exception& ex) {
            throw PermanentBackendError(std::string("unexpected embedding shape: ") + ex.what());
        }
        return vectors;
    }

private:
    HttpEndpoint endpoint_;
};

}  // namespace dprf
