#pragma once

#include <optional>
#include <string>

#include "dprf/backends.hpp"
#include "dprf/core.hpp"
#include "dprf/prompts.hpp"

namespace dprf {

struct AgentConfig {
    ChatRequest chat;  // model id and sampling defaults; prompt field unused
    AnalysisMode baa_mode = AnalysisMode::structured;
    int refine_retry_limit = 3;  // extra chat calls after a malformed refinement
    RetryPolicy retry;

    void validate() const {
        chat.validate();
        retry.validate();
        if (refine_retry_limit < 0) throw InvalidRequest("refine_retry_limit must be >= 0");
    }
};

// Aggregated backend usage across the chat calls of one loop step.
struct UsageMeter {
    long chat_calls = 0;
    long chat_attempts = 0;
    long prompt_tokens = 0;
    long completion_tokens = 0;
    bool token_counts_complete = true;

    void add(const ChatResponse& response) {
        ++chat_calls;
        chat_attempts += response.attempts_used;
        if (response.prompt_tokens && response.completion_tokens) {
            prompt_tokens += *response.prompt_tokens;
            completion_tokens += *response.completion_tokens;
        } else {
            token_counts_complete = false;
        }
    }
};

namespace detail {

inline ChatResponse agent_chat(ChatBackend& backend, const AgentConfig& cfg, std::string prompt,
                               UsageMeter* usage) {
    ChatRequest request = cfg.chat;
    request.prompt = std::move(prompt);
    ChatResponse response = chat_complete(backend, request, cfg.retry);
    if (usage != nullptr) usage->add(response);
    return response;
}

}  // namespace detail

inline TemplateId analysis_template(AnalysisMode mode) {
    switch (mode) {
        case AnalysisMode::free_form: return TemplateId::analysis_free_form;
        case AnalysisMode::structured: return TemplateId::analysis_structured;
        case AnalysisMode::no_persona: return TemplateId::analysis_no_persona;
    }
    throw UnknownTemplate("unhandled analysis mode");
}

// Role-playing step: render the scenario instruction with the persona and
// task context, return the trimmed completion as the behavior sample.
inline BehaviorSample generate_behavior(const PersonaProfile& persona, const TaskRecord& record,
                                        const AgentConfig& cfg, ChatBackend& backend,
                                        const PromptRegistry& prompts,
                                        UsageMeter* usage = nullptr) {
    if (strip_completion_text(persona.text).empty()) {
        throw EmptyPersona("generate_behavior requires a nonempty persona");
    }
    const std::string prompt = prompts.render(
        scenario_template(record.scenario),
        {{"persona", persona.text}, {"content", record.content}});
    const ChatResponse response = detail::agent_chat(backend, cfg, prompt, usage);

    BehaviorSample sample;
    sample.raw_completion = response.text;
    sample.text = strip_completion_text(response.text);
    sample.record_id = record.id;
    sample.iteration = persona.iteration;
    if (sample.text.empty()) {
        throw EmptyCompletion("behavior completion empty for record " + record.id);
    }
    return sample;
}

// Analysis step: compare the generated behavior against ground truth under
// the configured mode and return the textual divergence report.
inline DivergenceReport analyze_divergence(const PersonaProfile& persona, const TaskRecord& record,
                                           const BehaviorSample& generated, const AgentConfig& cfg,
                                           ChatBackend& backend, const PromptRegistry& prompts,
                                           UsageMeter* usage = nullptr) {
    if (record.ground_truth.empty()) {
        throw InvalidRequest("analyze_divergence requires nonempty ground truth");
    }
    if (generated.record_id != record.id) {
        throw InvalidRequest("behavior sample belongs to record " + generated.record_id +
                             ", not " + record.id);
    }
    Bindings bindings = {{"content", record.content},
                         {"generated_response", generated.text},
                         {"ground_truth", record.ground_truth}};
    if (cfg.baa_mode != AnalysisMode::no_persona) bindings.emplace("persona", persona.text);

    const std::string prompt = prompts.render(analysis_template(cfg.baa_mode), bindings);
    const ChatResponse response = detail::agent_chat(backend, cfg, prompt, usage);

    DivergenceReport report;
    report.text = strip_completion_text(response.text);
    report.mode = cfg.baa_mode;
    report.record_id = record.id;
    report.iteration = generated.iteration;
    if (report.text.empty()) {
        throw EmptyAnalysis("analysis completion empty for record " + record.id);
    }
    return report;
}

struct RefinementOutcome {
    PersonaProfile persona;
    bool rejected = false;  // format failure on every attempt; persona unchanged
};

// Refinement step. A completion is accepted once it normalizes to text
// starting with "You are"; otherwise the chat call is repeated up to
// refine_retry_limit more times, and on final failure the input persona is
// returned unchanged with the rejection flagged.
inline RefinementOutcome refine_persona(const PersonaProfile& persona,
                                        const DivergenceReport& report, const AgentConfig& cfg,
                                        ChatBackend& backend, const PromptRegistry& prompts,
                                        UsageMeter* usage = nullptr) {
    if (report.text.empty()) throw InvalidRequest("refine_persona requires a nonempty report");
    const std::string prompt = prompts.render(
        TemplateId::refine_persona, {{"persona", persona.text}, {"analysis", report.text}});

    const int attempts = 1 + cfg.refine_retry_limit;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        const ChatResponse response = detail::agent_chat(backend, cfg, prompt, usage);
        const std::string candidate = strip_completion_text(response.text);
        if (!candidate.empty() && has_persona_prefix(candidate)) {
            PersonaProfile refined;
            refined.text = candidate;
            refined.iteration = persona.iteration + 1;
            refined.parent_digest = persona.digest();
            return {std::move(refined), false};
        }
    }
    return {persona, true};
}

}  // namespace dprf
