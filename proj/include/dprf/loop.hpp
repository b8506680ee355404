#pragma once

#include <chrono>
#include <ctime>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dprf/agents.hpp"
#include "dprf/core.hpp"
#include "dprf/metric_suite.hpp"
#include "dprf/prompts.hpp"

namespace dprf {

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

enum class BackendClass { open_weight, proprietary };

struct StopCriterion {
    int max_iterations = 15;
    bool check_convergence = true;

    void validate() const {
        if (max_iterations < 1) throw InvalidRequest("max_iterations must be >= 1");
    }
};

// Iteration budgets differ by backend class: proprietary-grade analysts get
// the larger budget.
inline StopCriterion default_stop_criterion(BackendClass cls) {
    StopCriterion crit;
    crit.max_iterations = (cls == BackendClass::proprietary) ? 20 : 15;
    return crit;
}

enum class StopReason { converged, budget_exhausted, record_error };

inline std::string_view stop_reason_name(StopReason reason) {
    switch (reason) {
        case StopReason::converged: return "converged";
        case StopReason::budget_exhausted: return "budget_exhausted";
        case StopReason::record_error: return "record_error";
    }
    return "record_error";
}

inline std::optional<StopReason> parse_stop_reason(std::string_view name) {
    if (name == "converged") return StopReason::converged;
    if (name == "budget_exhausted") return StopReason::budget_exhausted;
    if (name == "record_error") return StopReason::record_error;
    return std::nullopt;
}

enum class StopDecision { proceed, converged, budget_exhausted };

// Convergence first, budget second: an identical persona at the budget edge
// still counts as converged.
inline StopDecision should_stop(const PersonaProfile& prev, const PersonaProfile& next, int t,
                                const StopCriterion& crit) {
    crit.validate();
    if (t < 1) throw InvalidRequest("should_stop requires t >= 1");
    if (crit.check_convergence && personas_equal(prev, next)) return StopDecision::converged;
    if (t >= crit.max_iterations) return StopDecision::budget_exhausted;
    return StopDecision::proceed;
}

// One loop step. Iteration 0 is the baseline evaluation of P_0 (no analysis,
// persona unchanged); iterations t >= 1 are analyze -> refine -> regenerate,
// so the metrics of step t always describe P_t's behavior.
struct IterationRecord {
    int iteration = 0;
    PersonaProfile persona_before;
    PersonaProfile persona_after;
    BehaviorSample behavior;
    DivergenceReport report;
    MetricVector metrics;
    std::vector<std::string> metric_flags;
    bool refinement_rejected = false;
    UsageMeter usage;
    std::string started_at;
    std::string ended_at;
};

struct Trajectory {
    std::string record_id;
    std::vector<IterationRecord> iterations;  // t = 1.. ; baseline metrics held separately
    MetricVector baseline_metrics;
    StopReason stop_reason = StopReason::record_error;
    std::string error_message;
};

// Where to pick a record back up after an interrupted run.
struct ResumeState {
    int last_iteration = 0;
    PersonaProfile persona;                     // persona_after at last_iteration
    std::optional<PersonaProfile> prev_persona; // persona_after at last_iteration - 1
    std::string behavior_text;                  // behavior at last_iteration
};

struct LoopContext {
    ChatBackend* chat = nullptr;
    const PromptRegistry* prompts = nullptr;
    const MetricSuite* metrics = nullptr;
    AgentConfig agent;
    StopCriterion stop;
    std::function<void(const IterationRecord&)> on_iteration;  // journaling hook
    WarnSink warn;
};

// Runs the full refinement loop for one record. Unrecoverable backend
// failures end the trajectory as record_error with the completed iterations
// preserved; validation failures are rejected before any backend call.
inline Trajectory run_trajectory(const TaskRecord& record, const LoopContext& ctx,
                                 const std::optional<ResumeState>& resume = std::nullopt) {
    Trajectory trajectory;
    trajectory.record_id = record.id;
    if (ctx.chat == nullptr || ctx.prompts == nullptr || ctx.metrics == nullptr) {
        throw InvalidRequest("loop context needs chat backend, prompt registry, and metric suite");
    }
    ctx.stop.validate();
    ctx.agent.validate();

    const ValidationResult validation = validate_record(record);
    if (ctx.warn) {
        for (const auto& w : validation.warnings) {
            ctx.warn(record.id + ": " + w.field + " " + w.message);
        }
    }
    if (!validation.ok()) {
        trajectory.error_message = "validation failed: " + validation.describe();
        return trajectory;
    }

    auto emit = [&](const IterationRecord& step) {
        if (ctx.on_iteration) ctx.on_iteration(step);
    };

    PersonaProfile prev;
    BehaviorSample prev_behavior;
    int start_t = 1;

    try {
        if (resume) {
            prev = resume->persona;
            prev_behavior.text = resume->behavior_text;
            prev_behavior.raw_completion = resume->behavior_text;
            prev_behavior.record_id = record.id;
            prev_behavior.iteration = resume->last_iteration;
            start_t = resume->last_iteration + 1;
            if (resume->last_iteration >= 1 && resume->prev_persona) {
                // The journal may have been cut between the last iteration and
                // its stop entry; re-evaluate so no extra iteration is run.
                const StopDecision decision =
                    should_stop(*resume->prev_persona, prev, resume->last_iteration, ctx.stop);
                if (decision == StopDecision::converged) {
                    trajectory.stop_reason = StopReason::converged;
                    return trajectory;
                }
                if (decision == StopDecision::budget_exhausted) {
                    trajectory.stop_reason = StopReason::budget_exhausted;
                    return trajectory;
                }
            }
        } else {
            prev.text = normalize_persona(record.initial_persona.text);
            prev.iteration = 0;
            if (!has_persona_prefix(prev.text) && ctx.warn) {
                ctx.warn(record.id + ": initial persona does not start with \"You are\"");
            }

            IterationRecord baseline;
            baseline.iteration = 0;
            baseline.persona_before = prev;
            baseline.persona_after = prev;
            baseline.started_at = utc_timestamp();
            baseline.behavior =
                generate_behavior(prev, record, ctx.agent, *ctx.chat, *ctx.prompts, &baseline.usage);
            const ScoreOutcome scored =
                ctx.metrics->score(baseline.behavior.text, record.ground_truth);
            baseline.metrics = scored.metrics;
            baseline.metric_flags = scored.flags;
            baseline.ended_at = utc_timestamp();
            trajectory.baseline_metrics = baseline.metrics;
            emit(baseline);
            prev_behavior = baseline.behavior;
        }

        for (int t = start_t;; ++t) {
            IterationRecord step;
            step.iteration = t;
            step.persona_before = prev;
            step.started_at = utc_timestamp();
            step.report = analyze_divergence(prev, record, prev_behavior, ctx.agent, *ctx.chat,
                                             *ctx.prompts, &step.usage);
            const RefinementOutcome refined =
                refine_persona(prev, step.report, ctx.agent, *ctx.chat, *ctx.prompts, &step.usage);
            step.refinement_rejected = refined.rejected;
            step.persona_after = refined.persona;
            step.behavior = generate_behavior(refined.persona, record, ctx.agent, *ctx.chat,
                                              *ctx.prompts, &step.usage);
            const ScoreOutcome scored = ctx.metrics->score(step.behavior.text, record.ground_truth);
            step.metrics = scored.metrics;
            step.metric_flags = scored.flags;
            step.ended_at = utc_timestamp();
            trajectory.iterations.push_back(step);
            emit(trajectory.iterations.back());

            const StopDecision decision = should_stop(prev, refined.persona, t, ctx.stop);
            if (decision == StopDecision::converged) {
                trajectory.stop_reason = StopReason::converged;
                break;
            }
            if (decision == StopDecision::budget_exhausted) {
                trajectory.stop_reason = StopReason::budget_exhausted;
                break;
            }
            prev = refined.persona;
            prev_behavior = trajectory.iterations.back().behavior;
        }
    } catch (const Error& err) {
        trajectory.stop_reason = StopReason::record_error;
        trajectory.error_message = err.what();
    }
    return trajectory;
}

}  // namespace dprf
