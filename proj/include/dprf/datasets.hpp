#pragma once

#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dprf/core.hpp"
#include "dprf/errors.hpp"
#include "dprf/prompts.hpp"

namespace dprf {

// Curated generic starting personas, one per scenario. These are this
// project's defaults; records may override them with their own profile.
namespace default_personas {

inline constexpr const char* kDebate =
    "You are a thoughtful speaker in a formal debate who argues the assigned position with "
    "well-structured reasoning, concrete evidence, and a respectful, persuasive tone.";

inline constexpr const char* kDepression =
    "You are a Reddit user who experiences depression and writes candid posts about your "
    "day-to-day feelings in a natural, conversational voice.";

inline constexpr const char* kSuicide =
    "You are a Reddit user who displays characteristics with risk of suicide and writes "
    "first-person posts reflecting your current state of mind.";

inline constexpr const char* kInterview =
    "You are a composed and well-informed interviewee participating in an interview, answering "
    "questions with personal anecdotes and measured reflection.";

inline constexpr const char* kMovieReview =
    "You are writing a comprehensive film review to be posted on an online movie review "
    "platform, drawing on broad knowledge of cinema and a distinctive critical voice.";

}  // namespace default_personas

// Interview records are expected to arrive pre-segmented; shorter fields are
// accepted with a warning since users may supply their own corpora.
inline constexpr std::size_t kInterviewMinContextChars = 600;
inline constexpr std::size_t kInterviewMinResponseChars = 50;

struct ScenarioSpec {
    Scenario scenario = Scenario::unknown;
    TemplateId template_id = TemplateId::instr_debate;
    std::string content_description;
    PersonaProfile default_persona;
};

inline const std::vector<ScenarioSpec>& scenario_specs() {
    static const std::vector<ScenarioSpec> specs = {
        {Scenario::debate, TemplateId::instr_debate,
         "debate topic and the speaker's assigned position",
         {default_personas::kDebate, 0, std::nullopt}},
        {Scenario::depression, TemplateId::instr_depression,
         "depression severity label (minimum, mild, moderate, severe)",
         {default_personas::kDepression, 0, std::nullopt}},
        {Scenario::suicide, TemplateId::instr_suicide,
         "suicide risk label (no, low, moderate, high, severe)",
         {default_personas::kSuicide, 0, std::nullopt}},
        {Scenario::interview, TemplateId::instr_interview,
         "two preceding conversation turns of the interview",
         {default_personas::kInterview, 0, std::nullopt}},
        {Scenario::movie_review, TemplateId::instr_movie,
         "film description and the sentiment label (positive, negative)",
         {default_personas::kMovieReview, 0, std::nullopt}},
    };
    return specs;
}

inline const ScenarioSpec& scenario_spec(Scenario scenario) {
    for (const auto& spec : scenario_specs()) {
        if (spec.scenario == scenario) return spec;
    }
    throw UnknownTemplate("no scenario spec for \"" + std::string(scenario_name(scenario)) + "\"");
}

inline const ScenarioSpec& scenario_spec_by_name(std::string_view name) {
    return scenario_spec(parse_scenario(name));
}

struct DatasetFile {
    std::string path;
    std::vector<TaskRecord> records;
};

inline std::string serialize_record(const TaskRecord& record) {
    nlohmann::json line = {
        {"id", record.id},
        {"scenario", record.scenario_raw.empty() ? std::string(scenario_name(record.scenario))
                                                 : record.scenario_raw},
        {"content", record.content},
        {"ground_truth", record.ground_truth},
        {"initial_persona", record.initial_persona.text},
    };
    return line.dump();
}

inline std::string serialize_records(const std::vector<TaskRecord>& records) {
    std::string out;
    for (const auto& record : records) {
        out += serialize_record(record);
        out += '\n';
    }
    return out;
}

// Parses line-delimited records, fills missing personas with the scenario
// default, and validates everything. All violations are aggregated into one
// ValidationFailed; warnings go to the sink.
inline std::vector<TaskRecord> parse_records(std::istream& in, const ScenarioSpec& spec,
                                             const WarnSink& warn = {}) {
    std::vector<TaskRecord> records;
    std::vector<Violation> violations;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t line_number = 0;

    while (std::getline(in, line)) {
        ++line_number;
        if (detail::trim_copy(line).empty()) continue;
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(std::string("invalid JSON record: ") + ex.what(), line_number);
        }
        if (!doc.is_object()) throw ParseError("record line must be a JSON object", line_number);

        TaskRecord record;
        try {
            record.id = doc.value("id", "");
            record.scenario_raw = doc.value("scenario", "");
            record.scenario = parse_scenario(record.scenario_raw);
            record.content = doc.value("content", "");
            record.ground_truth = doc.value("ground_truth", "");
            if (doc.contains("initial_persona") && !doc["initial_persona"].is_null()) {
                record.initial_persona =
                    PersonaProfile{doc["initial_persona"].get<std::string>(), 0, std::nullopt};
            } else {
                record.initial_persona = spec.default_persona;
            }
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(std::string("bad field type: ") + ex.what(), line_number);
        }

        if (record.scenario != Scenario::unknown && record.scenario != spec.scenario) {
            violations.push_back({record.id, "scenario",
                                  "record scenario \"" + record.scenario_raw +
                                      "\" differs from dataset scenario \"" +
                                      std::string(scenario_name(spec.scenario)) + "\""});
        }
        if (!record.id.empty() && !seen_ids.insert(record.id).second) {
            violations.push_back({record.id, "id", "duplicate record id"});
        }

        const ValidationResult result = validate_record(record);
        violations.insert(violations.end(), result.violations.begin(), result.violations.end());
        if (warn) {
            for (const auto& w : result.warnings) {
                warn(record.id + ": " + w.field + " " + w.message);
            }
            if (record.scenario == Scenario::interview) {
                if (record.content.size() < kInterviewMinContextChars) {
                    warn(record.id + ": interview context shorter than " +
                         std::to_string(kInterviewMinContextChars) + " characters");
                }
                if (record.ground_truth.size() < kInterviewMinResponseChars) {
                    warn(record.id + ": interview response shorter than " +
                         std::to_string(kInterviewMinResponseChars) + " characters");
                }
            }
        }
        records.push_back(std::move(record));
    }

    if (!violations.empty()) {
        ValidationResult aggregate;
        aggregate.violations = std::move(violations);
        throw ValidationFailed("dataset validation failed: " + aggregate.describe());
    }
    return records;
}

inline std::vector<TaskRecord> load_records(const std::string& path, const ScenarioSpec& spec,
                                            const WarnSink& warn = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset file " + path);
    return parse_records(in, spec, warn);
}

}  // namespace dprf
