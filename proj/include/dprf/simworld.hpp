#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dprf/backends.hpp"
#include "dprf/core.hpp"
#include "dprf/errors.hpp"
#include "dprf/metrics.hpp"

namespace dprf::sim {

// Words that appear in the harness's canonical renderings; trait tokens must
// not collide with them or word-boundary extraction becomes ambiguous.
inline const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words = {"you",    "are",  "an",     "individual",
                                                "with",   "traits", "none", "missing"};
    return words;
}

// A synthetic target individual: the hidden attribute set A* the loop must
// recover, and how many missing attributes the scripted analyst reveals per
// iteration (nullopt = all of them at once).
struct SyntheticTarget {
    std::vector<std::string> hidden_attrs;
    std::optional<int> release_rate;
    std::uint64_t seed = 0;

    void validate() const {
        if (hidden_attrs.empty()) throw InvalidRequest("hidden_attrs must be nonempty");
        if (release_rate && *release_rate < 1) {
            throw InvalidRequest("release_rate must be >= 1 when bounded");
        }
        for (const auto& token : hidden_attrs) {
            if (token.empty()) throw InvalidRequest("trait tokens must be nonempty");
            for (char c : token) {
                if (!std::isalnum(static_cast<unsigned char>(c)) ||
                    std::isupper(static_cast<unsigned char>(c))) {
                    throw InvalidRequest("trait token not lowercase alphanumeric: " + token);
                }
            }
            if (reserved_words().count(token) > 0) {
                throw InvalidRequest("trait token collides with a reserved word: " + token);
            }
        }
    }

    std::set<std::string> attr_set() const {
        return {hidden_attrs.begin(), hidden_attrs.end()};
    }
};

// Canonical behavior rendering: tokens sorted lexicographically.
inline std::string oracle_behavior(const std::set<std::string>& attrs) {
    if (attrs.empty()) return "Traits: none.";
    std::string out = "Traits: ";
    bool first = true;
    for (const auto& token : attrs) {
        if (!first) out += ", ";
        out += token;
        first = false;
    }
    out += ".";
    return out;
}

// Canonical persona covering the given attributes; always "You are" prefixed.
inline std::string canonical_persona(const std::set<std::string>& attrs) {
    if (attrs.empty()) return "You are an individual.";
    std::string out = "You are an individual with traits: ";
    bool first = true;
    for (const auto& token : attrs) {
        if (!first) out += ", ";
        out += token;
        first = false;
    }
    out += ".";
    return out;
}

// Refinement iterations until the loop detects identity: one per released
// batch of missing attributes, plus the final no-op iteration.
inline int iterations_to_converge(int missing, std::optional<int> rate) {
    if (missing < 0) throw InvalidRequest("missing count must be >= 0");
    if (missing == 0) return 1;
    if (!rate) return 2;
    if (*rate < 1) throw InvalidRequest("release rate must be >= 1");
    return (missing + *rate - 1) / *rate + 1;
}

namespace detail {

// Trait tokens present in a text section, matched on word boundaries via the
// metrics tokenizer (so "art" never matches inside "artist").
inline std::set<std::string> attr_tokens(std::string_view text, const SyntheticTarget& target) {
    const auto attrs = target.attr_set();
    std::set<std::string> found;
    for (const auto& token : metrics::tokenize(text).tokens) {
        if (attrs.count(token) > 0) found.insert(token);
    }
    return found;
}

inline std::string section_between(const std::string& prompt, std::string_view after,
                                   std::string_view before) {
    const std::size_t start = prompt.find(after);
    if (start == std::string::npos) {
        throw UnrecognizedPrompt("section header not found: " + std::string(after));
    }
    const std::size_t begin = start + after.size();
    const std::size_t end = prompt.find(before, begin);
    if (end == std::string::npos) {
        throw UnrecognizedPrompt("section terminator not found: " + std::string(before));
    }
    return prompt.substr(begin, end - begin);
}

struct InstructionShape {
    std::string_view opener;      // verbatim first line of the instruction prompt
    std::string_view after_persona;  // fixed text that follows the persona block
};

inline const std::vector<InstructionShape>& instruction_shapes() {
    static const std::vector<InstructionShape> shapes = {
        {"You are a person in a debate session with the following persona:",
         "\n\nYou are participating in a formal structured debate"},
        {"You are a Reddit user with the following persona:", "\n\nYOUR DEPRESSION LEVEL IS:"},
        {"You are a Reddit user with the following persona:", "\n\nYOUR SUICIDE RISK LEVEL IS:"},
        {"You are as an interviewee with the following persona:", "\n\nPrevious text:"},
        {"You are a person with following persona:",
         "\n\nYou are writing a comprehensive film review"},
    };
    return shapes;
}

}  // namespace detail

// Emulates all three agent roles over one synthetic target. The role is
// detected from the verbatim section headers the prompt registry emits, so a
// wrong or altered template surfaces as UnrecognizedPrompt.
inline std::string scripted_chat(const std::string& prompt, const SyntheticTarget& target) {
    target.validate();
    const auto attrs = target.attr_set();

    // Persona refinement: append the missing traits named by the analysis.
    if (prompt.find("CURRENT PERSONA:\n") != std::string::npos &&
        prompt.find("EXPERT ANALYSIS:\n") != std::string::npos) {
        const std::string persona =
            detail::section_between(prompt, "CURRENT PERSONA:\n", "\n\nEXPERT ANALYSIS:");
        const std::string analysis =
            detail::section_between(prompt, "EXPERT ANALYSIS:\n", "\n\nBased on the expert analysis above");
        const std::set<std::string> current = detail::attr_tokens(persona, target);
        std::set<std::string> merged = current;
        for (const auto& token : detail::attr_tokens(analysis, target)) merged.insert(token);
        if (merged == current) return dprf::detail::trim_copy(persona);
        return canonical_persona(merged);
    }

    // Behavior analysis: report the first k missing traits, sorted.
    if (prompt.find("EXPECTED RESPONSE:\n") != std::string::npos) {
        const std::string current =
            detail::section_between(prompt, "CURRENT RESPONSE:\n", "\n\nEXPECTED RESPONSE:");
        std::string expected;
        if (prompt.find("\n\nPerform a detailed") != std::string::npos) {
            expected = detail::section_between(prompt, "EXPECTED RESPONSE:\n", "\n\nPerform a detailed");
        } else {
            expected = detail::section_between(prompt, "EXPECTED RESPONSE:\n", "\n\nConduct a comprehensive");
        }
        const std::set<std::string> generated_covered = detail::attr_tokens(current, target);
        std::vector<std::string> missing;
        for (const auto& token : detail::attr_tokens(expected, target)) {
            if (generated_covered.count(token) == 0) missing.push_back(token);
        }
        if (missing.empty()) return "missing: none.";
        const std::size_t limit =
            target.release_rate ? std::min<std::size_t>(missing.size(),
                                                        static_cast<std::size_t>(*target.release_rate))
                                : missing.size();
        std::string out = "missing: ";
        for (std::size_t i = 0; i < limit; ++i) {
            if (i > 0) out += ", ";
            out += missing[i];
        }
        return out;
    }

    // Role-playing: express exactly the traits the persona covers.
    for (const auto& shape : detail::instruction_shapes()) {
        if (prompt.rfind(shape.opener, 0) != 0) continue;
        if (prompt.find(shape.after_persona) == std::string::npos) continue;
        const std::string persona = detail::section_between(
            prompt, std::string(shape.opener) + "\n\n", shape.after_persona);
        return oracle_behavior(detail::attr_tokens(persona, target));
    }

    throw UnrecognizedPrompt("prompt matches no known template shape");
}

class SimWorldChatBackend : public ChatBackend {
public:
    explicit SimWorldChatBackend(SyntheticTarget target) : target_(std::move(target)) {
        target_.validate();
    }

    ChatResponse complete(const ChatRequest& request) override {
        ChatResponse response;
        response.text = scripted_chat(request.prompt, target_);
        return response;
    }

    const SyntheticTarget& target() const { return target_; }

private:
    SyntheticTarget target_;
};

inline SyntheticTarget target_from_json(const nlohmann::json& doc) {
    SyntheticTarget target;
    try {
        target.hidden_attrs = doc.at("hidden_attrs").get<std::vector<std::string>>();
        if (doc.contains("release_rate") && !doc["release_rate"].is_null()) {
            if (doc["release_rate"].is_string()) {
                if (doc["release_rate"].get<std::string>() != "unbounded") {
                    throw InvalidRequest("release_rate must be an integer or \"unbounded\"");
                }
            } else {
                target.release_rate = doc["release_rate"].get<int>();
            }
        }
        if (doc.contains("seed")) target.seed = doc["seed"].get<std::uint64_t>();
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("invalid target definition: ") + ex.what(), 0);
    }
    target.validate();
    return target;
}

// Target fixture file: {"hidden_attrs": [...], "release_rate": 2 | "unbounded", "seed": 7}
inline SyntheticTarget load_target(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open simworld target file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("invalid target file: ") + ex.what(), 0);
    }
    return target_from_json(doc);
}

}  // namespace dprf::sim
