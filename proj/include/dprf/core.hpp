#pragma once

#include <cctype>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dprf/digest.hpp"
#include "dprf/errors.hpp"

namespace dprf {

using WarnSink = std::function<void(const std::string&)>;

// Refined personas must open with this prefix; initial personas that do not
// are accepted with a warning (curated biographies are often third-person).
inline constexpr std::string_view kPersonaPrefix = "You are";

enum class Scenario {
    debate,
    depression,
    suicide,
    interview,
    movie_review,
    unknown,  // parse failure sentinel; rejected by validate_record
};

inline std::string_view scenario_name(Scenario s) {
    switch (s) {
        case Scenario::debate: return "debate";
        case Scenario::depression: return "depression";
        case Scenario::suicide: return "suicide";
        case Scenario::interview: return "interview";
        case Scenario::movie_review: return "movie_review";
        case Scenario::unknown: break;
    }
    return "unknown";
}

inline Scenario parse_scenario(std::string_view name) {
    if (name == "debate") return Scenario::debate;
    if (name == "depression") return Scenario::depression;
    if (name == "suicide") return Scenario::suicide;
    if (name == "interview") return Scenario::interview;
    if (name == "movie_review") return Scenario::movie_review;
    return Scenario::unknown;
}

inline std::vector<Scenario> all_scenarios() {
    return {Scenario::debate, Scenario::depression, Scenario::suicide,
            Scenario::interview, Scenario::movie_review};
}

enum class AnalysisMode { free_form, structured, no_persona };

inline std::string_view analysis_mode_name(AnalysisMode m) {
    switch (m) {
        case AnalysisMode::free_form: return "free_form";
        case AnalysisMode::structured: return "structured";
        case AnalysisMode::no_persona: return "no_persona";
    }
    return "free_form";
}

inline std::optional<AnalysisMode> parse_analysis_mode(std::string_view name) {
    if (name == "free_form") return AnalysisMode::free_form;
    if (name == "structured") return AnalysisMode::structured;
    if (name == "no_persona") return AnalysisMode::no_persona;
    return std::nullopt;
}

// The mutable persona P_t plus provenance.
struct PersonaProfile {
    std::string text;
    int iteration = 0;
    std::optional<std::string> parent_digest;

    std::string digest() const { return digest_hex(text); }
};

// One target individual's task instance.
struct TaskRecord {
    std::string id;
    Scenario scenario = Scenario::unknown;
    std::string scenario_raw;  // as written in the input file
    std::string content;       // task context x, pre-assembled
    std::string ground_truth;  // human behavior y
    PersonaProfile initial_persona;
};

// A generated behavior sample (y-hat at some iteration).
struct BehaviorSample {
    std::string text;  // post-processed form of raw_completion
    std::string record_id;
    int iteration = 0;
    std::string raw_completion;
};

// The analysis agent's textual divergence report.
struct DivergenceReport {
    std::string text;
    AnalysisMode mode = AnalysisMode::free_form;
    std::string record_id;
    int iteration = 0;
};

// Scores for one (generated, ground truth) pair. nullopt = skipped
// (embedding-backed metrics are skippable when no backend is configured).
struct MetricVector {
    std::optional<double> rouge_l_f1;
    std::optional<double> bertscore_f1;
    std::optional<double> embedding_similarity;
};

namespace detail {

inline bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

inline std::string trim_copy(std::string_view s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && is_space(s[begin])) ++begin;
    while (end > begin && is_space(s[end - 1])) --end;
    return std::string(s.substr(begin, end - begin));
}

}  // namespace detail

// Trims surrounding whitespace and removes enclosing markdown code fences.
// The opening fence line (``` plus optional language tag) and the closing
// fence are dropped; the bytes between them are kept untouched apart from
// the outer trim. Applied until stable so the result is a fixed point.
inline std::string strip_completion_text(std::string_view raw) {
    std::string s = detail::trim_copy(raw);
    for (;;) {
        if (s.rfind("```", 0) != 0) break;
        if (s.size() < 4 || s.compare(s.size() - 3, 3, "```") != 0) break;
        const std::size_t first_newline = s.find('\n');
        const std::size_t closing = s.rfind("```");
        if (first_newline == std::string::npos || closing <= first_newline) break;
        s = detail::trim_copy(
            std::string_view(s).substr(first_newline + 1, closing - first_newline - 1));
    }
    return s;
}

// Canonical persona text: trimmed, fence-stripped, nonempty.
inline std::string normalize_persona(std::string_view raw) {
    std::string s = strip_completion_text(raw);
    if (s.empty()) throw EmptyPersona("persona text is empty after normalization");
    return s;
}

inline bool has_persona_prefix(std::string_view text) {
    return text.rfind(kPersonaPrefix, 0) == 0;
}

// Persona equality for convergence checks: byte equality of normalized text.
inline bool personas_equal(const PersonaProfile& a, const PersonaProfile& b) {
    return strip_completion_text(a.text) == strip_completion_text(b.text);
}

struct Violation {
    std::string record_id;
    std::string field;
    std::string message;
};

struct ValidationResult {
    std::vector<Violation> violations;
    std::vector<Violation> warnings;

    bool ok() const { return violations.empty(); }

    std::string describe() const {
        std::string out;
        for (const auto& v : violations) {
            if (!out.empty()) out += "; ";
            out += v.record_id + ": " + v.field + " " + v.message;
        }
        return out;
    }
};

// Checks the record invariants. Violations are returned, never thrown, and
// the record itself is left untouched.
inline ValidationResult validate_record(const TaskRecord& record) {
    ValidationResult result;
    auto violation = [&](std::string field, std::string message) {
        result.violations.push_back({record.id, std::move(field), std::move(message)});
    };
    auto warning = [&](std::string field, std::string message) {
        result.warnings.push_back({record.id, std::move(field), std::move(message)});
    };

    if (record.id.empty()) violation("id", "empty");
    if (record.scenario == Scenario::unknown) {
        violation("scenario", "unknown scenario \"" + record.scenario_raw + "\"");
    }
    if (record.content.empty()) violation("content", "empty");
    if (record.ground_truth.empty()) violation("ground_truth", "empty");

    const std::string persona = strip_completion_text(record.initial_persona.text);
    if (persona.empty()) {
        violation("initial_persona", "empty");
    } else if (!has_persona_prefix(persona)) {
        warning("initial_persona", "does not start with \"You are\"");
    }
    return result;
}

}  // namespace dprf
