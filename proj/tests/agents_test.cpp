#include "dprf/agents.hpp"

#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace dprf {
namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

// Backend that records every prompt and replies from a fixed script.
class CapturingBackend : public ChatBackend {
public:
    explicit CapturingBackend(std::string reply) : reply_(std::move(reply)) {}

    ChatResponse complete(const ChatRequest& request) override {
        prompts.push_back(request.prompt);
        ChatResponse response;
        response.text = reply_;
        return response;
    }

    std::vector<std::string> prompts;

private:
    std::string reply_;
};

TaskRecord debate_record() {
    TaskRecord record;
    record.id = "r1";
    record.scenario = Scenario::debate;
    record.scenario_raw = "debate";
    record.content = "Topic: Enhancing Drugs in Competitive Sports; Position: for";
    record.ground_truth = "Ladies and gentlemen of the panel...";
    record.initial_persona = {"You are a seasoned debater.", 0, std::nullopt};
    return record;
}

const PersonaProfile kPersona{"You are a seasoned debater.", 0, std::nullopt};

TEST(GenerateBehavior, RendersInstructionWithPersonaVerbatim) {
    CapturingBackend backend("A fiery opening statement.");
    const PromptRegistry prompts = PromptRegistry::builtin();
    const BehaviorSample sample =
        generate_behavior(kPersona, debate_record(), AgentConfig{}, backend, prompts);

    ASSERT_EQ(backend.prompts.size(), 1u);
    const std::string& prompt = backend.prompts[0];
    EXPECT_EQ(prompt.rfind("You are a person in a debate session with the following persona:", 0),
              0u);
    EXPECT_EQ(count_occurrences(prompt, kPersona.text), 1u);
    EXPECT_NE(prompt.find(debate_record().content), std::string::npos);
    EXPECT_EQ(sample.text, "A fiery opening statement.");
    EXPECT_EQ(sample.record_id, "r1");
    EXPECT_EQ(sample.iteration, 0);
}

TEST(GenerateBehavior, StripsFencedCompletion) {
    CapturingBackend backend("```\nWrapped behavior.\n```");
    const PromptRegistry prompts = PromptRegistry::builtin();
    const BehaviorSample sample =
        generate_behavior(kPersona, debate_record(), AgentConfig{}, backend, prompts);
    EXPECT_EQ(sample.text, "Wrapped behavior.");
    EXPECT_EQ(sample.raw_completion, "```\nWrapped behavior.\n```");
}

TEST(GenerateBehavior, EmptyPersonaRejectedBeforeBackendCall) {
    CapturingBackend backend("anything");
    const PromptRegistry prompts = PromptRegistry::builtin();
    const PersonaProfile empty{"  ", 0, std::nullopt};
    EXPECT_THROW(generate_behavior(empty, debate_record(), AgentConfig{}, backend, prompts),
                 EmptyPersona);
    EXPECT_TRUE(backend.prompts.empty());
}

TEST(GenerateBehavior, EmptyCompletionIsAnError) {
    CapturingBackend backend("   \n");
    const PromptRegistry prompts = PromptRegistry::builtin();
    EXPECT_THROW(generate_behavior(kPersona, debate_record(), AgentConfig{}, backend, prompts),
                 EmptyCompletion);
}

BehaviorSample sample_for(const TaskRecord& record) {
    BehaviorSample sample;
    sample.text = "Generated argument about testing.";
    sample.record_id = record.id;
    sample.iteration = 0;
    sample.raw_completion = sample.text;
    return sample;
}

TEST(AnalyzeDivergence, StructuredModeUsesToMTemplate) {
    CapturingBackend backend("1. More conviction.");
    const PromptRegistry prompts = PromptRegistry::builtin();
    AgentConfig cfg;
    cfg.baa_mode = AnalysisMode::structured;
    const TaskRecord record = debate_record();
    const DivergenceReport report =
        analyze_divergence(kPersona, record, sample_for(record), cfg, backend, prompts);

    const std::string& prompt = backend.prompts.at(0);
    EXPECT_NE(prompt.find("five internal mental states"), std::string::npos);
    EXPECT_EQ(count_occurrences(prompt, kPersona.text), 1u);
    EXPECT_NE(prompt.find("CURRENT RESPONSE:\nGenerated argument about testing."),
              std::string::npos);
    EXPECT_NE(prompt.find("EXPECTED RESPONSE:\nLadies and gentlemen of the panel..."),
              std::string::npos);
    EXPECT_EQ(report.mode, AnalysisMode::structured);
    EXPECT_EQ(report.text, "1. More conviction.");
}

TEST(AnalyzeDivergence, NoPersonaModeOmitsPersona) {
    CapturingBackend backend("1. Something.");
    const PromptRegistry prompts = PromptRegistry::builtin();
    AgentConfig cfg;
    cfg.baa_mode = AnalysisMode::no_persona;
    const TaskRecord record = debate_record();
    const DivergenceReport report =
        analyze_divergence(kPersona, record, sample_for(record), cfg, backend, prompts);

    const std::string& prompt = backend.prompts.at(0);
    EXPECT_EQ(prompt.find("PERSONA:"), std::string::npos);
    EXPECT_EQ(count_occurrences(prompt, kPersona.text), 0u);
    EXPECT_EQ(report.mode, AnalysisMode::no_persona);
}

TEST(AnalyzeDivergence, FreeFormAndStructuredConsumeIdenticalBindings) {
    const PromptRegistry prompts = PromptRegistry::builtin();
    const TaskRecord record = debate_record();
    const BehaviorSample sample = sample_for(record);

    CapturingBackend free_backend("1.");
    AgentConfig free_cfg;
    free_cfg.baa_mode = AnalysisMode::free_form;
    analyze_divergence(kPersona, record, sample, free_cfg, free_backend, prompts);

    CapturingBackend structured_backend("1.");
    AgentConfig structured_cfg;
    structured_cfg.baa_mode = AnalysisMode::structured;
    analyze_divergence(kPersona, record, sample, structured_cfg, structured_backend, prompts);

    for (const std::string* prompt :
         {&free_backend.prompts.at(0), &structured_backend.prompts.at(0)}) {
        EXPECT_EQ(count_occurrences(*prompt, kPersona.text), 1u);
        EXPECT_NE(prompt->find(record.content), std::string::npos);
        EXPECT_NE(prompt->find(sample.text), std::string::npos);
        EXPECT_NE(prompt->find(record.ground_truth), std::string::npos);
    }
    EXPECT_NE(free_backend.prompts.at(0), structured_backend.prompts.at(0));
}

TEST(AnalyzeDivergence, EmptyCompletionIsEmptyAnalysis) {
    CapturingBackend backend("");
    const PromptRegistry prompts = PromptRegistry::builtin();
    const TaskRecord record = debate_record();
    EXPECT_THROW(
        analyze_divergence(kPersona, record, sample_for(record), AgentConfig{}, backend, prompts),
        EmptyAnalysis);
}

TEST(AnalyzeDivergence, MismatchedSampleRejected) {
    CapturingBackend backend("1.");
    const PromptRegistry prompts = PromptRegistry::builtin();
    const TaskRecord record = debate_record();
    BehaviorSample sample = sample_for(record);
    sample.record_id = "other";
    EXPECT_THROW(analyze_divergence(kPersona, record, sample, AgentConfig{}, backend, prompts),
                 InvalidRequest);
}

DivergenceReport report_for(const std::string& record_id) {
    DivergenceReport report;
    report.text = "1. Add more rhetorical questions.";
    report.mode = AnalysisMode::structured;
    report.record_id = record_id;
    report.iteration = 0;
    return report;
}

TEST(RefinePersona, AcceptsWellFormedCompletion) {
    CapturingBackend backend("You are a meticulous debater.");
    const PromptRegistry prompts = PromptRegistry::builtin();
    const RefinementOutcome outcome =
        refine_persona(kPersona, report_for("r1"), AgentConfig{}, backend, prompts);
    EXPECT_FALSE(outcome.rejected);
    EXPECT_EQ(outcome.persona.text, "You are a meticulous debater.");
    EXPECT_EQ(outcome.persona.iteration, 1);
    EXPECT_EQ(outcome.persona.parent_digest, kPersona.digest());
    ASSERT_EQ(backend.prompts.size(), 1u);
    EXPECT_EQ(count_occurrences(backend.prompts[0], kPersona.text), 1u);
}

TEST(RefinePersona, FenceStrippedThenAccepted) {
    CapturingBackend backend("```\nYou are X.\n```");
    const PromptRegistry prompts = PromptRegistry::builtin();
    const RefinementOutcome outcome =
        refine_persona(kPersona, report_for("r1"), AgentConfig{}, backend, prompts);
    EXPECT_FALSE(outcome.rejected);
    EXPECT_EQ(outcome.persona.text, "You are X.");
}

TEST(RefinePersona, MalformedCompletionsExhaustRetriesAndDegrade) {
    CapturingBackend backend("Persona: X");
    const PromptRegistry prompts = PromptRegistry::builtin();
    AgentConfig cfg;
    cfg.refine_retry_limit = 2;
    UsageMeter usage;
    const RefinementOutcome outcome =
        refine_persona(kPersona, report_for("r1"), cfg, backend, prompts, &usage);
    EXPECT_TRUE(outcome.rejected);
    EXPECT_EQ(outcome.persona.text, kPersona.text);
    EXPECT_EQ(outcome.persona.iteration, kPersona.iteration);
    EXPECT_EQ(backend.prompts.size(), 3u);  // 1 + retry limit
    EXPECT_EQ(usage.chat_calls, 3);
}

TEST(RefinePersona, EmptyReportRejected) {
    CapturingBackend backend("You are X.");
    const PromptRegistry prompts = PromptRegistry::builtin();
    DivergenceReport report = report_for("r1");
    report.text = "";
    EXPECT_THROW(refine_persona(kPersona, report, AgentConfig{}, backend, prompts),
                 InvalidRequest);
}

TEST(Agents, UsageMeterAccumulates) {
    CapturingBackend backend("You are Y.");
    const PromptRegistry prompts = PromptRegistry::builtin();
    UsageMeter usage;
    generate_behavior(kPersona, debate_record(), AgentConfig{}, backend, prompts, &usage);
    refine_persona(kPersona, report_for("r1"), AgentConfig{}, backend, prompts, &usage);
    EXPECT_EQ(usage.chat_calls, 2);
    EXPECT_EQ(usage.chat_attempts, 2);
    EXPECT_FALSE(usage.token_counts_complete);  // scripted backend reports no token counts
}

}  // namespace
}  // namespace dprf
