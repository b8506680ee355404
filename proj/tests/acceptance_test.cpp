// Acceptance suite: offline, property-based checks of the whole engine with
// scripted backends. One test per criterion; ctest prints one line each.

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dprf/loop.hpp"
#include "dprf/metrics.hpp"
#include "dprf/prompts.hpp"
#include "dprf/runner.hpp"
#include "dprf/simworld.hpp"
#include "sim_fixtures.hpp"
#include "test_util.hpp"

namespace dprf {
namespace {

using Clock = std::chrono::steady_clock;
using dprf_test::TempDir;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// --- independent oracles (test-side only) ---

std::size_t lcs_by_enumeration(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
    auto is_subsequence = [](const std::vector<std::string>& needle,
                             const std::vector<std::string>& haystack) {
        std::size_t i = 0;
        for (const auto& token : haystack) {
            if (i < needle.size() && needle[i] == token) ++i;
        }
        return i == needle.size();
    };
    std::size_t best = 0;
    for (std::size_t mask = 0; mask < (1u << a.size()); ++mask) {
        std::vector<std::string> subsequence;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (mask & (1u << i)) subsequence.push_back(a[i]);
        }
        if (subsequence.size() > best && is_subsequence(subsequence, b)) {
            best = subsequence.size();
        }
    }
    return best;
}

double oracle_cosine(const std::vector<double>& u, const std::vector<double>& v) {
    double dot = 0, uu = 0, vv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    return dot / (std::sqrt(uu) * std::sqrt(vv));
}

metrics::ScoredPair bertscore_matrix_oracle(const std::vector<std::vector<double>>& cand,
                                            const std::vector<std::vector<double>>& ref) {
    std::vector<std::vector<double>> matrix(cand.size(), std::vector<double>(ref.size()));
    for (std::size_t i = 0; i < cand.size(); ++i) {
        for (std::size_t j = 0; j < ref.size(); ++j) matrix[i][j] = oracle_cosine(cand[i], ref[j]);
    }
    metrics::ScoredPair out;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        out.precision += *std::max_element(matrix[i].begin(), matrix[i].end());
    }
    out.precision /= double(cand.size());
    for (std::size_t j = 0; j < ref.size(); ++j) {
        double best = -1;
        for (std::size_t i = 0; i < cand.size(); ++i) best = std::max(best, matrix[i][j]);
        out.recall += best;
    }
    out.recall /= double(ref.size());
    out.f1 = out.precision + out.recall == 0
                 ? 0
                 : 2 * out.precision * out.recall / (out.precision + out.recall);
    return out;
}

TEST(AcceptanceCriteria, C01_MetricOracles) {
    const auto start = Clock::now();
    std::mt19937_64 rng(101);

    const std::vector<std::string> vocab = {"a", "b", "c"};
    for (int trial = 0; trial < 1000; ++trial) {
        const auto cand = dprf_test::random_tokens(rng, 8, vocab);
        const auto ref = dprf_test::random_tokens(rng, 8, vocab);
        const std::size_t lcs = lcs_by_enumeration(cand, ref);
        metrics::ScoredPair expected;
        expected.precision = cand.empty() ? 0.0 : double(lcs) / double(cand.size());
        expected.recall = ref.empty() ? 0.0 : double(lcs) / double(ref.size());
        expected.f1 = expected.precision + expected.recall == 0
                          ? 0
                          : 2 * expected.precision * expected.recall /
                                (expected.precision + expected.recall);
        const metrics::ScoredPair actual = metrics::rouge_l_f1({cand}, {ref});
        ASSERT_NEAR(actual.precision, expected.precision, 1e-9);
        ASSERT_NEAR(actual.recall, expected.recall, 1e-9);
        ASSERT_NEAR(actual.f1, expected.f1, 1e-9);
    }

    std::uniform_int_distribution<std::size_t> token_count(1, 6);
    std::uniform_real_distribution<double> component(-1.0, 1.0);
    auto random_vectors = [&](std::size_t count) {
        std::vector<std::vector<double>> out(count, std::vector<double>(4));
        for (auto& vec : out) {
            double norm = 0;
            do {
                norm = 0;
                for (auto& x : vec) {
                    x = component(rng);
                    norm += x * x;
                }
            } while (norm < 1e-6);
        }
        return out;
    };
    for (int trial = 0; trial < 500; ++trial) {
        const auto cand = random_vectors(token_count(rng));
        const auto ref = random_vectors(token_count(rng));
        const metrics::ScoredPair actual = metrics::bertscore_f1(cand, ref);
        const metrics::ScoredPair expected = bertscore_matrix_oracle(cand, ref);
        ASSERT_NEAR(actual.precision, expected.precision, 1e-9);
        ASSERT_NEAR(actual.recall, expected.recall, 1e-9);
        ASSERT_NEAR(actual.f1, expected.f1, 1e-9);
    }

    std::uniform_real_distribution<double> wide(-5.0, 5.0);
    std::uniform_real_distribution<double> scale(0.05, 20.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> u(5), v(5);
        double norm = 0;
        do {
            norm = 0;
            for (auto& x : u) {
                x = wide(rng);
                norm += x * x;
            }
        } while (norm == 0);
        for (auto& x : v) x = wide(rng);
        v[0] += 1e-3;
        ASSERT_NEAR(metrics::cosine(u, u), 1.0, 1e-12);
        std::vector<double> scaled = u;
        const double alpha = scale(rng);
        for (auto& x : scaled) x *= alpha;
        ASSERT_NEAR(metrics::cosine(scaled, v), metrics::cosine(u, v), 1e-12);
    }

    EXPECT_LT(seconds_since(start), 10.0);
}

TEST(AcceptanceCriteria, C02_HandComputedValues) {
    const metrics::ScoredPair rouge = metrics::rouge_l_f1({{"a", "b", "c"}}, {{"a", "x", "c"}});
    EXPECT_EQ(rouge.f1, 2.0 / 3.0);

    const metrics::ScoredPair bert = metrics::bertscore_f1({{1, 0}, {0, 1}}, {{1, 0}});
    EXPECT_EQ(bert.f1, 2.0 / 3.0);

    EXPECT_NEAR(metrics::cosine({1, 0}, {1, 1}), 0.7071067811865475, 1e-12);
}

TEST(AcceptanceCriteria, C03_PromptFidelity) {
    const PromptRegistry registry = PromptRegistry::builtin();
    auto render_full = [&registry](TemplateId id) {
        Bindings bindings;
        for (const auto& name : registry.placeholder_inventory(id)) bindings[name] = "<" + name + ">";
        return registry.render(id, bindings);
    };

    EXPECT_NE(render_full(TemplateId::refine_persona)
                  .find("THE REFINED PERSONA SHOULD START WITH \"You are\""),
              std::string::npos);
    for (TemplateId id : {TemplateId::analysis_structured, TemplateId::analysis_no_persona}) {
        EXPECT_NE(render_full(id).find("five internal mental states"), std::string::npos);
    }
    for (TemplateId id : {TemplateId::analysis_free_form, TemplateId::analysis_structured,
                          TemplateId::analysis_no_persona}) {
        EXPECT_NE(render_full(id).find("expert in cognitive science"), std::string::npos);
    }
    EXPECT_NE(render_full(TemplateId::instr_depression).find("YOUR DEPRESSION LEVEL IS"),
              std::string::npos);
    EXPECT_NE(render_full(TemplateId::instr_suicide).find("YOUR SUICIDE RISK LEVEL IS"),
              std::string::npos);
    EXPECT_NE(render_full(TemplateId::instr_debate).find("a person in a debate session"),
              std::string::npos);
    EXPECT_NE(render_full(TemplateId::instr_interview)
                  .find("as an interviewee with the following persona"),
              std::string::npos);
    EXPECT_NE(render_full(TemplateId::instr_movie).find("writing a comprehensive film review"),
              std::string::npos);

    const std::string no_persona = render_full(TemplateId::analysis_no_persona);
    EXPECT_EQ(no_persona.find("PERSONA:"), std::string::npos);

    const std::map<TemplateId, std::string> pinned = {
        {TemplateId::analysis_free_form, "c457f1cc21e8cca7"},
        {TemplateId::analysis_structured, "d964c5e4d1fcc9ad"},
        {TemplateId::analysis_no_persona, "8211eae6de45da15"},
        {TemplateId::refine_persona, "4a4b6ff6ecaae4f6"},
        {TemplateId::instr_debate, "f3e9dc97159816f6"},
        {TemplateId::instr_depression, "ea694ece05160f72"},
        {TemplateId::instr_suicide, "f3cfc8959ffdae2a"},
        {TemplateId::instr_interview, "d358122a31ddacdf"},
        {TemplateId::instr_movie, "d311a4e0617a081a"},
    };
    for (const auto& [id, checksum] : pinned) {
        EXPECT_EQ(registry.checksum(id), checksum) << template_name(id);
    }
}

TEST(AcceptanceCriteria, C04_LoopConvergenceLaw) {
    const auto start = Clock::now();
    const auto pool = dprf_test::trait_pool();
    ASSERT_GE(pool.size(), 13u);

    for (int missing = 0; missing <= 12; ++missing) {
        for (std::optional<int> rate :
             {std::optional<int>(1), std::optional<int>(2), std::optional<int>(3),
              std::optional<int>()}) {
            sim::SyntheticTarget target;
            target.hidden_attrs.assign(pool.begin(), pool.begin() + missing + 1);
            target.release_rate = rate;
            dprf_test::SimLoopFixture fixture(target);
            const TaskRecord record = dprf_test::sim_record(target, {pool[0]});

            const Trajectory trajectory = run_trajectory(record, fixture.context());
            const std::string label =
                "m=" + std::to_string(missing) +
                " k=" + (rate ? std::to_string(*rate) : std::string("unbounded"));
            ASSERT_EQ(trajectory.stop_reason, StopReason::converged)
                << label << ": " << trajectory.error_message;
            ASSERT_EQ(static_cast<int>(trajectory.iterations.size()),
                      sim::iterations_to_converge(missing, rate))
                << label;
            ASSERT_DOUBLE_EQ(*trajectory.iterations.back().metrics.rouge_l_f1, 1.0) << label;
        }
    }
    EXPECT_LT(seconds_since(start), 30.0);
}

TEST(AcceptanceCriteria, C05_MonotoneTrajectories) {
    std::mt19937_64 rng(505);
    const auto pool = dprf_test::trait_pool();
    std::uniform_int_distribution<std::size_t> attr_count(1, 8);
    std::uniform_int_distribution<int> rate_pick(0, 3);

    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::string> shuffled = pool;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        sim::SyntheticTarget target;
        const std::size_t n = attr_count(rng);
        target.hidden_attrs.assign(shuffled.begin(), shuffled.begin() + n);
        const int rate = rate_pick(rng);
        if (rate > 0) target.release_rate = rate;

        std::uniform_int_distribution<std::size_t> covered(0, n);
        std::set<std::string> initial(target.hidden_attrs.begin(),
                                      target.hidden_attrs.begin() +
                                          static_cast<long>(covered(rng)));

        dprf_test::SimLoopFixture fixture(target);
        const TaskRecord record = dprf_test::sim_record(target, initial);
        const Trajectory trajectory = run_trajectory(record, fixture.context());
        ASSERT_EQ(trajectory.stop_reason, StopReason::converged) << trajectory.error_message;

        double previous = *trajectory.baseline_metrics.rouge_l_f1;
        for (const auto& step : trajectory.iterations) {
            ASSERT_GE(*step.metrics.rouge_l_f1, previous) << "trial " << trial;
            previous = *step.metrics.rouge_l_f1;
        }
    }
}

TEST(AcceptanceCriteria, C06_StopCriteria) {
    // Identical personas stop as converged at t = 1.
    const PersonaProfile persona{"You are steady.", 0, std::nullopt};
    EXPECT_EQ(should_stop(persona, persona, 1, StopCriterion{}), StopDecision::converged);

    sim::SyntheticTarget aligned;
    aligned.hidden_attrs = {"alpha"};
    dprf_test::SimLoopFixture aligned_fixture(aligned);
    const Trajectory converged = run_trajectory(
        dprf_test::sim_record(aligned, {"alpha"}), aligned_fixture.context());
    EXPECT_EQ(converged.stop_reason, StopReason::converged);
    EXPECT_EQ(converged.iterations.size(), 1u);

    // Personas that never repeat run to exactly the budget, at both 15 and 20.
    for (int budget : {15, 20}) {
        auto counter = std::make_shared<std::atomic<int>>(0);
        ScriptedChatBackend restless([counter](const std::string& prompt) -> std::string {
            if (prompt.find("CURRENT PERSONA:\n") != std::string::npos) {
                return "You are version " + std::to_string(counter->fetch_add(1)) + ".";
            }
            if (prompt.find("EXPECTED RESPONSE:\n") != std::string::npos) {
                return "1. Keep changing.";
            }
            return "Some behavior.";
        });

        TaskRecord record;
        record.id = "restless";
        record.scenario = Scenario::debate;
        record.scenario_raw = "debate";
        record.content = "Topic: endless; Position: for";
        record.ground_truth = "Never matched.";
        record.initial_persona = {"You are version -1.", 0, std::nullopt};

        MetricSuite suite;
        const PromptRegistry prompts = PromptRegistry::builtin();
        LoopContext ctx;
        ctx.chat = &restless;
        ctx.prompts = &prompts;
        ctx.metrics = &suite;
        ctx.stop.max_iterations = budget;

        const Trajectory trajectory = run_trajectory(record, ctx);
        ASSERT_EQ(trajectory.stop_reason, StopReason::budget_exhausted) << "budget " << budget;
        ASSERT_EQ(static_cast<int>(trajectory.iterations.size()), budget);
    }
}

RunManifest acceptance_manifest(const TempDir& dir) {
    sim::SyntheticTarget target;
    target.hidden_attrs = {"alpha", "bravo", "cedar", "delta", "ember"};
    target.release_rate = 1;

    std::vector<TaskRecord> records = {
        dprf_test::sim_record(target, {"alpha", "bravo", "cedar", "delta", "ember"}, "r1"),
        dprf_test::sim_record(target, {"alpha", "bravo", "cedar"}, "r2"),
        dprf_test::sim_record(target, {"alpha"}, "r3"),
    };
    const std::string dataset = dir.file("dataset.jsonl");
    dprf_test::write_file(dataset, serialize_records(records));

    RunManifest manifest;
    manifest.run_id = "acceptance";
    manifest.dataset_path = dataset;
    manifest.scenario = Scenario::debate;
    manifest.chat.kind = "simworld";
    manifest.chat.target = target;
    manifest.embeddings.kind = "hash";
    manifest.embeddings.dimension = 8;
    manifest.concurrency_limit = 2;
    manifest.journal_path = dir.file("full.jsonl");
    manifest.seed = 11;
    return manifest;
}

std::vector<std::string> canonical_journal(const std::string& path) {
    const std::string text = dprf_test::read_file(path);
    std::vector<std::tuple<std::string, int, std::string, std::string>> keyed;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) break;
        nlohmann::json entry = nlohmann::json::parse(text.substr(pos, nl - pos));
        pos = nl + 1;
        for (const char* field : {"created_at", "started_at", "ended_at", "ts"}) {
            entry.erase(field);
        }
        keyed.emplace_back(entry.value("record_id", ""), entry.value("iteration", -1),
                           entry.value("type", ""), entry.dump());
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::string> lines;
    for (auto& [record, iteration, type, dump] : keyed) lines.push_back(std::move(dump));
    return lines;
}

TEST(AcceptanceCriteria, C07_CrashSafeResume) {
    TempDir dir("acceptance_resume");
    const RunManifest manifest = acceptance_manifest(dir);
    execute_run(manifest);
    const auto uninterrupted = canonical_journal(manifest.journal_path);
    const std::string text = dprf_test::read_file(manifest.journal_path);

    std::vector<std::size_t> line_ends;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') line_ends.push_back(i + 1);
    }
    ASSERT_GT(line_ends.size(), 5u);

    std::mt19937_64 rng(707);
    std::uniform_int_distribution<std::size_t> cut(1, line_ends.size() - 1);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t keep_lines = cut(rng);
        RunManifest interrupted = manifest;
        interrupted.journal_path = dir.file("cut_" + std::to_string(trial) + ".jsonl");
        dprf_test::write_file(interrupted.journal_path,
                              text.substr(0, line_ends[keep_lines - 1]));
        resume_run(interrupted);
        ASSERT_EQ(canonical_journal(interrupted.journal_path), uninterrupted)
            << "cut after line " << keep_lines;
    }
}

TEST(AcceptanceCriteria, C08_AggregationArithmetic) {
    EXPECT_DOUBLE_EQ(*relative_improvement_pct(0.5, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(*relative_improvement_pct(0.3, 0.2), 50.0);
    EXPECT_DOUBLE_EQ(*relative_improvement_pct(0.3, 0.4), -25.0);

    EXPECT_EQ(runner_detail::comparison_cell(0.3, 50.0, false), "0.30(+50.00%)");
    EXPECT_EQ(runner_detail::comparison_cell(0.3, -25.0, false), "0.30(-25.00%)");
    EXPECT_EQ(runner_detail::comparison_cell(0.5, 0.0, false), "0.50(+0.00%)");
    EXPECT_EQ(runner_detail::comparison_cell(0.3, std::nullopt, true), "0.30(undefined)");

    // Carry-forward means on a ragged 3-record journal, against hand-computed
    // averages: r1 stops at 1, r2 at 2, r3 at 3.
    TempDir dir("acceptance_aggregate");
    auto iter_entry = [](const std::string& record, int iteration, double rouge) {
        return nlohmann::json{{"type", "iter"},
                              {"record_id", record},
                              {"iteration", iteration},
                              {"persona_after", "You are p."},
                              {"behavior", "b"},
                              {"metrics",
                               {{"rouge_l_f1", rouge},
                                {"bertscore_f1", nullptr},
                                {"embedding_similarity", nullptr}}}}
            .dump();
    };
    auto stop_entry = [](const std::string& record, int iteration, const std::string& reason) {
        return nlohmann::json{{"type", "stop"},
                              {"record_id", record},
                              {"iteration", iteration},
                              {"stop_reason", reason}}
            .dump();
    };
    std::string journal = nlohmann::json{{"type", "meta"},
                                         {"run_id", "ragged"},
                                         {"manifest_digest", "d"},
                                         {"created_at", "t"}}
                              .dump() +
                          "\n";
    journal += iter_entry("r1", 0, 0.2) + "\n" + iter_entry("r1", 1, 0.4) + "\n" +
               stop_entry("r1", 1, "converged") + "\n";
    journal += iter_entry("r2", 0, 0.0) + "\n" + iter_entry("r2", 1, 0.5) + "\n" +
               iter_entry("r2", 2, 0.6) + "\n" + stop_entry("r2", 2, "converged") + "\n";
    journal += iter_entry("r3", 0, 0.4) + "\n" + iter_entry("r3", 1, 0.1) + "\n" +
               iter_entry("r3", 2, 0.2) + "\n" + iter_entry("r3", 3, 0.3) + "\n" +
               stop_entry("r3", 3, "budget_exhausted") + "\n";
    const std::string path = dir.file("ragged.jsonl");
    dprf_test::write_file(path, journal);

    const AggregateReport report = aggregate(path);
    const MetricAggregate& rouge = report.metrics.at(0);
    ASSERT_EQ(rouge.mean_by_iteration.size(), 4u);
    EXPECT_NEAR(*rouge.mean_by_iteration[0], (0.2 + 0.0 + 0.4) / 3, 1e-12);
    EXPECT_NEAR(*rouge.mean_by_iteration[1], (0.4 + 0.5 + 0.1) / 3, 1e-12);
    EXPECT_NEAR(*rouge.mean_by_iteration[2], (0.4 + 0.6 + 0.2) / 3, 1e-12);
    EXPECT_NEAR(*rouge.mean_by_iteration[3], (0.4 + 0.6 + 0.3) / 3, 1e-12);

    // The exported comparison table uses the value(+/-pct%) cell format.
    AggregateReport structured;
    structured.run_id = "structured";
    structured.record_count = 1;
    structured.max_iteration = 1;
    AggregateReport free_form = structured;
    free_form.run_id = "free_form";
    for (const auto& name : metric_names()) {
        MetricAggregate a;
        a.metric = name;
        a.mean_by_iteration = {0.2, 0.3};
        a.baseline = 0.2;
        a.final_value = 0.3;
        a.best_value = 0.3;
        a.final_improvement_pct = relative_improvement_pct(0.3, 0.2);
        a.best_improvement_pct = a.final_improvement_pct;
        structured.metrics.push_back(a);
        MetricAggregate b = a;
        b.mean_by_iteration = {0.2, 0.25};
        b.final_value = 0.25;
        b.best_value = 0.25;
        b.final_improvement_pct = relative_improvement_pct(0.25, 0.2);
        b.best_improvement_pct = b.final_improvement_pct;
        free_form.metrics.push_back(b);
    }
    const ExportedFiles files = export_report({structured, free_form}, dir.file("out"));
    const std::string comparison = dprf_test::read_file(files.comparison_path);
    EXPECT_NE(comparison.find("rouge_l_f1,final,0.20,0.30(+50.00%),0.25(+25.00%)"),
              std::string::npos);
}

TEST(AcceptanceCriteria, C09_DefaultsAudit) {
    const RunManifest manifest;
    EXPECT_DOUBLE_EQ(manifest.agent.chat.temperature, 0.6);
    EXPECT_DOUBLE_EQ(manifest.agent.chat.top_p, 0.95);
    EXPECT_EQ(manifest.agent.chat.max_tokens, 2000);
    EXPECT_EQ(manifest.agent.retry.max_attempts, 100);
}

TEST(AcceptanceCriteria, C10_RetryPolicy) {
    // n failures below the budget succeed with attempts_used = n + 1.
    for (int failures : {0, 1, 2, 5}) {
        ScriptedChatBackend inner([](const std::string&) { return "ok"; });
        FaultInjectingChatBackend flaky(inner, failures);
        RetryPolicy policy;
        policy.max_attempts = failures + 1;
        policy.jitter_seed = 99;
        std::vector<std::chrono::milliseconds> delays;
        ChatRequest request;
        request.prompt = "x";
        const ChatResponse response = chat_complete(
            flaky, request, policy,
            [&delays](std::chrono::milliseconds d) { delays.push_back(d); });
        ASSERT_EQ(response.attempts_used, failures + 1);
        ASSERT_EQ(static_cast<int>(delays.size()), failures);
    }

    // Failing max_attempts times raises RetriesExhausted.
    {
        ScriptedChatBackend inner([](const std::string&) { return "unreachable"; });
        FaultInjectingChatBackend dead(inner, FaultInjectingChatBackend::kAlways);
        RetryPolicy policy;
        policy.max_attempts = 4;
        policy.jitter_seed = 99;
        ChatRequest request;
        request.prompt = "x";
        try {
            chat_complete(dead, request, policy, [](std::chrono::milliseconds) {});
            FAIL() << "expected RetriesExhausted";
        } catch (const RetriesExhausted& err) {
            EXPECT_EQ(err.attempts(), 4);
        }
        EXPECT_EQ(dead.calls(), 4);
    }

    // Backoff delays never exceed the cap.
    {
        ScriptedChatBackend inner([](const std::string&) { return "unreachable"; });
        FaultInjectingChatBackend dead(inner, FaultInjectingChatBackend::kAlways);
        RetryPolicy policy;
        policy.max_attempts = 50;
        policy.jitter_seed = 1234;
        std::vector<std::chrono::milliseconds> delays;
        ChatRequest request;
        request.prompt = "x";
        EXPECT_THROW(chat_complete(dead, request, policy,
                                   [&delays](std::chrono::milliseconds d) {
                                       delays.push_back(d);
                                   }),
                     RetriesExhausted);
        ASSERT_EQ(delays.size(), 49u);
        for (std::size_t i = 0; i < delays.size(); ++i) {
            ASSERT_LE(delays[i].count(), policy.cap.count());
            ASSERT_LE(delays[i], backoff_ceiling(policy, static_cast<int>(i) + 1));
        }
    }
}

}  // namespace
}  // namespace dprf
