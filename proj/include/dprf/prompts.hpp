#pragma once

#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dprf/core.hpp"
#include "dprf/digest.hpp"
#include "dprf/errors.hpp"
#include "dprf/prompt_texts.hpp"

namespace dprf {

enum class TemplateId {
    analysis_free_form,
    analysis_structured,
    analysis_no_persona,
    refine_persona,
    instr_debate,
    instr_depression,
    instr_suicide,
    instr_interview,
    instr_movie,
};

inline constexpr std::array<TemplateId, 9> kAllTemplateIds = {
    TemplateId::analysis_free_form, TemplateId::analysis_structured,
    TemplateId::analysis_no_persona, TemplateId::refine_persona,
    TemplateId::instr_debate,        TemplateId::instr_depression,
    TemplateId::instr_suicide,       TemplateId::instr_interview,
    TemplateId::instr_movie,
};

inline std::string_view template_name(TemplateId id) {
    switch (id) {
        case TemplateId::analysis_free_form: return "analysis_free_form";
        case TemplateId::analysis_structured: return "analysis_structured";
        case TemplateId::analysis_no_persona: return "analysis_no_persona";
        case TemplateId::refine_persona: return "refine_persona";
        case TemplateId::instr_debate: return "instr_debate";
        case TemplateId::instr_depression: return "instr_depression";
        case TemplateId::instr_suicide: return "instr_suicide";
        case TemplateId::instr_interview: return "instr_interview";
        case TemplateId::instr_movie: return "instr_movie";
    }
    return "";
}

inline TemplateId parse_template_id(std::string_view name) {
    for (TemplateId id : kAllTemplateIds) {
        if (template_name(id) == name) return id;
    }
    throw UnknownTemplate("unknown template \"" + std::string(name) + "\"");
}

// Placeholder names a template body may use, in reporting order.
inline const std::vector<std::string>& known_placeholders() {
    static const std::vector<std::string> names = {
        "persona", "content", "generated_response", "ground_truth", "analysis"};
    return names;
}

inline std::set<std::string> required_bindings_for(TemplateId id) {
    switch (id) {
        case TemplateId::analysis_free_form:
        case TemplateId::analysis_structured:
            return {"persona", "content", "generated_response", "ground_truth"};
        case TemplateId::analysis_no_persona:
            return {"content", "generated_response", "ground_truth"};
        case TemplateId::refine_persona:
            return {"persona", "analysis"};
        case TemplateId::instr_debate:
        case TemplateId::instr_depression:
        case TemplateId::instr_suicide:
        case TemplateId::instr_interview:
        case TemplateId::instr_movie:
            return {"persona", "content"};
    }
    return {};
}

struct PromptTemplate {
    TemplateId id;
    std::string body;
    std::set<std::string> required_bindings;
};

using Bindings = std::map<std::string, std::string>;

namespace detail {

inline std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
    std::size_t count = 0;
    for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
         pos = haystack.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

// Body must contain exactly the required placeholders (each at least once),
// and the no-persona variant must carry no PERSONA header.
inline void check_template(const PromptTemplate& tpl) {
    for (const auto& name : known_placeholders()) {
        const std::size_t occurrences = count_occurrences(tpl.body, "{" + name + "}");
        const bool required = tpl.required_bindings.count(name) > 0;
        if (required && occurrences == 0) {
            throw UnknownTemplate("template " + std::string(template_name(tpl.id)) +
                                  " lacks required placeholder {" + name + "}");
        }
        if (!required && occurrences > 0) {
            throw UnknownTemplate("template " + std::string(template_name(tpl.id)) +
                                  " contains unexpected placeholder {" + name + "}");
        }
    }
    if (tpl.id == TemplateId::analysis_no_persona &&
        tpl.body.find("PERSONA:") != std::string::npos) {
        throw UnknownTemplate("analysis_no_persona must not contain a PERSONA: header");
    }
}

inline const char* builtin_body(TemplateId id) {
    switch (id) {
        case TemplateId::analysis_free_form: return prompt_texts::kAnalysisFreeForm;
        case TemplateId::analysis_structured: return prompt_texts::kAnalysisStructured;
        case TemplateId::analysis_no_persona: return prompt_texts::kAnalysisNoPersona;
        case TemplateId::refine_persona: return prompt_texts::kRefinePersona;
        case TemplateId::instr_debate: return prompt_texts::kInstrDebate;
        case TemplateId::instr_depression: return prompt_texts::kInstrDepression;
        case TemplateId::instr_suicide: return prompt_texts::kInstrSuicide;
        case TemplateId::instr_interview: return prompt_texts::kInstrInterview;
        case TemplateId::instr_movie: return prompt_texts::kInstrMovie;
    }
    throw UnknownTemplate("unhandled template id");
}

struct Correction {
    TemplateId id;
    std::string_view from;
    std::string_view to;
};

// Wording fixes for the fixed-typo template set. Each entry must match the
// pristine body exactly once.
inline const std::vector<Correction>& corrections() {
    static const std::vector<Correction> table = {
        {TemplateId::analysis_structured, "BACKGROUND INFORMATION\n", "BACKGROUND INFORMATION:\n"},
        {TemplateId::analysis_structured, "immediate outcomes long-term", "immediate outcomes to long-term"},
        {TemplateId::analysis_structured, "may leads to", "may lead to"},
        {TemplateId::analysis_no_persona, "immediate outcomes long-term", "immediate outcomes to long-term"},
        {TemplateId::analysis_no_persona, "may leads to", "may lead to"},
        {TemplateId::refine_persona, "things(such as analysis,comparison, and so on)",
         "things (such as analysis, comparison, and so on)"},
        {TemplateId::instr_depression, "severity,your post", "severity, your post"},
        {TemplateId::instr_depression, "the given ONE risk levels", "the given ONE risk level"},
        {TemplateId::instr_suicide, "- sever Risk:", "- Severe Risk:"},
        {TemplateId::instr_suicide, "(reflecting the specified suicide risk level).\nExpress",
         "(reflecting the specified suicide risk level).\n- Express"},
        {TemplateId::instr_suicide, "risk level.\nCreate a post", "risk level.\n- Create a post"},
        {TemplateId::instr_suicide, "no other things.Do not", "no other things. Do not"},
        {TemplateId::instr_suicide, "Your response must consist solely of the refined persona text.",
         "Your response must consist solely of the generated post text."},
        {TemplateId::instr_interview, "You are as an interviewee", "You are an interviewee"},
        {TemplateId::instr_movie, "You are a person with following persona",
         "You are a person with the following persona"},
        {TemplateId::instr_movie, "described above-use", "described above - use"},
    };
    return table;
}

inline std::string apply_corrections(TemplateId id, std::string body) {
    for (const auto& fix : corrections()) {
        if (fix.id != id) continue;
        const std::size_t pos = body.find(fix.from);
        if (pos == std::string::npos) {
            throw UnknownTemplate("correction target not found in " +
                                  std::string(template_name(id)));
        }
        body.replace(pos, fix.from.size(), fix.to);
    }
    return body;
}

}  // namespace detail

// Which wording the registry serves: the published text byte-for-byte, or
// the documented fixed-typo variant (off by default everywhere).
enum class TemplateFidelity { pristine, corrected };

class PromptRegistry {
public:
    static PromptRegistry builtin(TemplateFidelity fidelity = TemplateFidelity::pristine) {
        PromptRegistry registry;
        for (TemplateId id : kAllTemplateIds) {
            std::string body = detail::builtin_body(id);
            if (fidelity == TemplateFidelity::corrected) {
                body = detail::apply_corrections(id, std::move(body));
            }
            registry.put(id, std::move(body));
        }
        return registry;
    }

    // One UTF-8 file per template id: <dir>/<id>.txt, bytes used verbatim.
    static PromptRegistry from_directory(const std::string& dir) {
        PromptRegistry registry;
        for (TemplateId id : kAllTemplateIds) {
            const std::string path = dir + "/" + std::string(template_name(id)) + ".txt";
            std::ifstream in(path, std::ios::binary);
            if (!in) throw IoError("cannot open template asset " + path);
            std::ostringstream buffer;
            buffer << in.rdbuf();
            registry.put(id, buffer.str());
        }
        return registry;
    }

    const PromptTemplate& get(TemplateId id) const {
        return templates_.at(static_cast<std::size_t>(id));
    }

    std::set<std::string> placeholder_inventory(TemplateId id) const {
        return get(id).required_bindings;
    }

    std::string checksum(TemplateId id) const { return digest_hex(get(id).body); }

    // Single-pass substitution: every placeholder occurrence is replaced by
    // its binding and nothing else changes. Binding values are never
    // rescanned, so a value containing "{content}" stays literal.
    std::string render(TemplateId id, const Bindings& bindings) const {
        const PromptTemplate& tpl = get(id);
        for (const auto& name : known_placeholders()) {
            if (tpl.required_bindings.count(name) > 0 && bindings.find(name) == bindings.end()) {
                throw MissingBinding(name);
            }
        }
        for (const auto& [name, value] : bindings) {
            (void)value;
            if (tpl.required_bindings.find(name) == tpl.required_bindings.end()) {
                throw UnknownBinding(name);
            }
        }

        std::string out;
        out.reserve(tpl.body.size());
        std::size_t pos = 0;
        while (pos < tpl.body.size()) {
            const std::size_t brace = tpl.body.find('{', pos);
            if (brace == std::string::npos) {
                out.append(tpl.body, pos, std::string::npos);
                break;
            }
            out.append(tpl.body, pos, brace - pos);
            const std::size_t close = tpl.body.find('}', brace);
            bool substituted = false;
            if (close != std::string::npos) {
                const std::string name = tpl.body.substr(brace + 1, close - brace - 1);
                auto it = bindings.find(name);
                if (it != bindings.end()) {
                    out += it->second;
                    pos = close + 1;
                    substituted = true;
                }
            }
            if (!substituted) {
                out += '{';
                pos = brace + 1;
            }
        }
        return out;
    }

private:
    PromptRegistry() : templates_(kAllTemplateIds.size()) {}

    void put(TemplateId id, std::string body) {
        PromptTemplate tpl{id, std::move(body), required_bindings_for(id)};
        detail::check_template(tpl);
        templates_[static_cast<std::size_t>(id)] = std::move(tpl);
    }

    std::vector<PromptTemplate> templates_;
};

// Instruction template for a scenario; total over the five scenarios.
inline TemplateId scenario_template(Scenario scenario) {
    switch (scenario) {
        case Scenario::debate: return TemplateId::instr_debate;
        case Scenario::depression: return TemplateId::instr_depression;
        case Scenario::suicide: return TemplateId::instr_suicide;
        case Scenario::interview: return TemplateId::instr_interview;
        case Scenario::movie_review: return TemplateId::instr_movie;
        case Scenario::unknown: break;
    }
    throw UnknownTemplate("no instruction template for unknown scenario");
}

// Inverse of scenario_template; rejects non-instruction templates.
inline Scenario scenario_of(TemplateId id) {
    switch (id) {
        case TemplateId::instr_debate: return Scenario::debate;
        case TemplateId::instr_depression: return Scenario::depression;
        case TemplateId::instr_suicide: return Scenario::suicide;
        case TemplateId::instr_interview: return Scenario::interview;
        case TemplateId::instr_movie: return Scenario::movie_review;
        default:
            throw UnknownTemplate(std::string(template_name(id)) +
                                  " is not an instruction template");
    }
}

}  // namespace dprf
