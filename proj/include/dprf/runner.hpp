#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "dprf/agents.hpp"
#include "dprf/backends.hpp"
#include "dprf/core.hpp"
#include "dprf/datasets.hpp"
#include "dprf/http_backend.hpp"
#include "dprf/journal.hpp"
#include "dprf/loop.hpp"
#include "dprf/metric_suite.hpp"
#include "dprf/prompts.hpp"
#include "dprf/simworld.hpp"

namespace dprf {

struct ChatBackendSpec {
    std::string kind = "http";  // http | simworld
    std::string base_url;
    std::string model_id;
    std::string api_key_env = "DPRF_API_KEY";
    std::string target_file;                      // simworld fixture, or
    std::optional<sim::SyntheticTarget> target;   // inline definition
};

struct EmbeddingBackendSpec {
    std::string kind = "none";  // none | http | hash
    std::string base_url;
    std::string model_id;
    std::string api_key_env = "DPRF_API_KEY";
    int dimension = 64;  // hash backend vector size
};

// Full experiment configuration. A freshly constructed manifest carries the
// shared sampling defaults (temperature 0.6, top-p 0.95, max tokens 2000)
// and the retry budget of 100 attempts.
struct RunManifest {
    std::string run_id;
    std::string dataset_path;
    Scenario scenario = Scenario::unknown;
    ChatBackendSpec chat;
    EmbeddingBackendSpec embeddings;
    BackendClass backend_class = BackendClass::open_weight;
    AgentConfig agent;
    std::optional<int> max_iterations;  // defaults from backend_class when unset
    bool check_convergence = true;
    int concurrency_limit = 1;
    std::string journal_path;
    std::uint64_t seed = 0;  // scripted backends only
    TemplateFidelity fidelity = TemplateFidelity::pristine;
    std::string templates_dir;

    StopCriterion stop_criterion() const {
        StopCriterion crit = default_stop_criterion(backend_class);
        if (max_iterations) crit.max_iterations = *max_iterations;
        crit.check_convergence = check_convergence;
        return crit;
    }

    void validate() const {
        if (run_id.empty()) throw InvalidRequest("run_id must be nonempty");
        if (concurrency_limit < 1) throw InvalidRequest("concurrency_limit must be >= 1");
        if (dataset_path.empty()) throw InvalidRequest("dataset_path must be set");
        if (journal_path.empty()) throw InvalidRequest("journal_path must be set");
        if (scenario == Scenario::unknown) throw InvalidRequest("scenario must be one of the five");
        stop_criterion().validate();
        agent.validate();
    }

    nlohmann::json to_json() const {
        nlohmann::json chat_json = {{"kind", chat.kind},
                                    {"base_url", chat.base_url},
                                    {"model_id", chat.model_id},
                                    {"api_key_env", chat.api_key_env},
                                    {"target_file", chat.target_file}};
        if (chat.target) {
            chat_json["target"] = {{"hidden_attrs", chat.target->hidden_attrs},
                                   {"seed", chat.target->seed}};
            if (chat.target->release_rate) {
                chat_json["target"]["release_rate"] = *chat.target->release_rate;
            } else {
                chat_json["target"]["release_rate"] = "unbounded";
            }
        }
        nlohmann::json doc = {
            {"run_id", run_id},
            {"dataset", {{"path", dataset_path}, {"scenario", std::string(scenario_name(scenario))}}},
            {"chat_backend", chat_json},
            {"embedding_backend",
             {{"kind", embeddings.kind},
              {"base_url", embeddings.base_url},
              {"model_id", embeddings.model_id},
              {"api_key_env", embeddings.api_key_env},
              {"dimension", embeddings.dimension}}},
            {"backend_class",
             backend_class == BackendClass::proprietary ? "proprietary" : "open_weight"},
            {"sampling",
             {{"temperature", agent.chat.temperature},
              {"top_p", agent.chat.top_p},
              {"max_tokens", agent.chat.max_tokens}}},
            {"baa_mode", std::string(analysis_mode_name(agent.baa_mode))},
            {"refine_retry_limit", agent.refine_retry_limit},
            {"retry",
             {{"max_attempts", agent.retry.max_attempts},
              {"base_ms", agent.retry.base.count()},
              {"cap_ms", agent.retry.cap.count()}}},
            {"stop",
             {{"max_iterations", stop_criterion().max_iterations},
              {"check_convergence", check_convergence}}},
            {"concurrency_limit", concurrency_limit},
            {"journal_path", journal_path},
            {"seed", seed},
            {"templates",
             {{"fidelity", fidelity == TemplateFidelity::corrected ? "corrected" : "pristine"},
              {"dir", templates_dir}}},
        };
        return doc;
    }

    // Identity of the experiment configuration. Where the journal lives and
    // how many records run in flight do not change results, so both stay out
    // of the digest and may differ on resume.
    std::string digest() const {
        nlohmann::json doc = to_json();
        doc.erase("journal_path");
        doc.erase("concurrency_limit");
        return digest_hex(doc.dump());
    }

    static RunManifest from_json(const nlohmann::json& doc) {
        RunManifest manifest;
        manifest.run_id = doc.value("run_id", "");
        if (doc.contains("dataset")) {
            manifest.dataset_path = doc["dataset"].value("path", "");
            manifest.scenario = parse_scenario(doc["dataset"].value("scenario", ""));
        }
        if (doc.contains("chat_backend")) {
            const auto& chat = doc["chat_backend"];
            manifest.chat.kind = chat.value("kind", "http");
            manifest.chat.base_url = chat.value("base_url", "");
            manifest.chat.model_id = chat.value("model_id", "");
            manifest.chat.api_key_env = chat.value("api_key_env", "DPRF_API_KEY");
            manifest.chat.target_file = chat.value("target_file", "");
            if (chat.contains("target") && chat["target"].is_object()) {
                manifest.chat.target = sim::target_from_json(chat["target"]);
            }
        }
        if (doc.contains("embedding_backend")) {
            const auto& emb = doc["embedding_backend"];
            manifest.embeddings.kind = emb.value("kind", "none");
            manifest.embeddings.base_url = emb.value("base_url", "");
            manifest.embeddings.model_id = emb.value("model_id", "");
            manifest.embeddings.api_key_env = emb.value("api_key_env", "DPRF_API_KEY");
            manifest.embeddings.dimension = emb.value("dimension", 64);
        }
        if (doc.value("backend_class", "open_weight") == "proprietary") {
            manifest.backend_class = BackendClass::proprietary;
        }
        if (doc.contains("sampling")) {
            const auto& sampling = doc["sampling"];
            manifest.agent.chat.temperature = sampling.value("temperature", 0.6);
            manifest.agent.chat.top_p = sampling.value("top_p", 0.95);
            manifest.agent.chat.max_tokens = sampling.value("max_tokens", 2000);
        }
        if (doc.contains("baa_mode")) {
            const auto mode = parse_analysis_mode(doc.value("baa_mode", ""));
            if (!mode) throw InvalidRequest("unknown baa_mode in manifest");
            manifest.agent.baa_mode = *mode;
        }
        manifest.agent.refine_retry_limit = doc.value("refine_retry_limit", 3);
        if (doc.contains("retry")) {
            const auto& retry = doc["retry"];
            manifest.agent.retry.max_attempts = retry.value("max_attempts", 100);
            manifest.agent.retry.base = std::chrono::milliseconds(retry.value("base_ms", 1000));
            manifest.agent.retry.cap = std::chrono::milliseconds(retry.value("cap_ms", 60000));
        }
        if (doc.contains("stop")) {
            const auto& stop = doc["stop"];
            if (stop.contains("max_iterations")) {
                manifest.max_iterations = stop["max_iterations"].get<int>();
            }
            manifest.check_convergence = stop.value("check_convergence", true);
        }
        manifest.concurrency_limit = doc.value("concurrency_limit", 1);
        manifest.journal_path = doc.value("journal_path", "");
        manifest.seed = doc.value("seed", std::uint64_t{0});
        if (doc.contains("templates")) {
            if (doc["templates"].value("fidelity", "pristine") == "corrected") {
                manifest.fidelity = TemplateFidelity::corrected;
            }
            manifest.templates_dir = doc["templates"].value("dir", "");
        }
        return manifest;
    }

    static RunManifest load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open manifest " + path);
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(std::string("invalid manifest JSON: ") + ex.what(), 0);
        }
        return from_json(doc);
    }
};

struct RunSummary {
    int records_total = 0;
    int converged = 0;
    int budget_exhausted = 0;
    int errors = 0;
    int already_done = 0;  // resume: records untouched because a stop was journaled

    int completed() const { return converged + budget_exhausted; }
};

namespace runner_detail {

struct Runtime {
    std::unique_ptr<ChatBackend> chat;
    std::unique_ptr<EmbeddingBackend> embedder;
    PromptRegistry prompts = PromptRegistry::builtin();
    MetricSuite suite;
    AgentConfig agent;
    StopCriterion stop;
};

inline Runtime build_runtime(const RunManifest& manifest, const WarnSink& warn) {
    Runtime runtime;
    runtime.agent = manifest.agent;
    runtime.stop = manifest.stop_criterion();
    if (manifest.seed != 0 && runtime.agent.retry.jitter_seed == 0) {
        runtime.agent.retry.jitter_seed = manifest.seed;
    }

    if (!manifest.templates_dir.empty()) {
        runtime.prompts = PromptRegistry::from_directory(manifest.templates_dir);
    } else {
        runtime.prompts = PromptRegistry::builtin(manifest.fidelity);
    }

    if (manifest.chat.kind == "simworld") {
        sim::SyntheticTarget target;
        if (manifest.chat.target) {
            target = *manifest.chat.target;
        } else if (!manifest.chat.target_file.empty()) {
            target = sim::load_target(manifest.chat.target_file);
        } else {
            throw InvalidRequest("simworld backend needs target or target_file");
        }
        if (target.seed == 0) target.seed = manifest.seed;
        runtime.chat = std::make_unique<sim::SimWorldChatBackend>(std::move(target));
    } else if (manifest.chat.kind == "http") {
        if (manifest.chat.base_url.empty()) {
            throw InvalidRequest("http chat backend needs base_url");
        }
        HttpEndpoint endpoint;
        endpoint.base_url = manifest.chat.base_url;
        endpoint.api_key = read_api_key_env(manifest.chat.api_key_env);
        runtime.chat = std::make_unique<HttpChatBackend>(endpoint);
        runtime.agent.chat.model_id = manifest.chat.model_id;
    } else {
        throw InvalidRequest("unknown chat backend kind: " + manifest.chat.kind);
    }
    if (manifest.chat.kind == "simworld") runtime.agent.chat.model_id = "simworld";

    if (manifest.embeddings.kind == "hash") {
        const std::uint64_t seed = manifest.seed != 0 ? manifest.seed : 1;
        runtime.embedder = std::make_unique<HashEmbeddingBackend>(
            static_cast<std::size_t>(manifest.embeddings.dimension), seed);
    } else if (manifest.embeddings.kind == "http") {
        if (manifest.embeddings.base_url.empty()) {
            throw InvalidRequest("http embedding backend needs base_url");
        }
        HttpEndpoint endpoint;
        endpoint.base_url = manifest.embeddings.base_url;
        endpoint.api_key = read_api_key_env(manifest.embeddings.api_key_env);
        runtime.embedder = std::make_unique<HttpEmbeddingBackend>(endpoint);
    } else if (manifest.embeddings.kind != "none") {
        throw InvalidRequest("unknown embedding backend kind: " + manifest.embeddings.kind);
    }
    runtime.suite = MetricSuite(runtime.embedder.get(), manifest.embeddings.model_id, warn);
    return runtime;
}

struct Job {
    const TaskRecord* record = nullptr;
    std::optional<ResumeState> resume;
};

// Runs the given jobs with at most concurrency_limit in flight, journaling
// every iteration as it completes and one stop or error entry per record.
inline RunSummary run_jobs(const std::vector<Job>& jobs, const Runtime& runtime,
                           int concurrency_limit, JournalWriter& writer, const WarnSink& warn) {
    RunSummary summary;
    std::mutex summary_mutex;
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        for (;;) {
            const std::size_t index = next.fetch_add(1);
            if (index >= jobs.size()) return;
            const Job& job = jobs[index];

            int last_journaled =
                job.resume ? job.resume->last_iteration : -1;

            LoopContext ctx;
            ctx.chat = runtime.chat.get();
            ctx.prompts = &runtime.prompts;
            ctx.metrics = &runtime.suite;
            ctx.agent = runtime.agent;
            ctx.stop = runtime.stop;
            ctx.warn = warn;
            ctx.on_iteration = [&writer, &job, &last_journaled](const IterationRecord& step) {
                writer.append_iteration(job.record->id, step);
                last_journaled = step.iteration;
            };

            try {
                const Trajectory trajectory = run_trajectory(*job.record, ctx, job.resume);

                std::lock_guard<std::mutex> lock(summary_mutex);
                if (trajectory.stop_reason == StopReason::record_error) {
                    writer.append_error(job.record->id, last_journaled, trajectory.error_message);
                    ++summary.errors;
                    if (warn) warn(job.record->id + ": record_error: " + trajectory.error_message);
                } else {
                    writer.append_stop(job.record->id, last_journaled, trajectory.stop_reason);
                    if (trajectory.stop_reason == StopReason::converged) {
                        ++summary.converged;
                    } else {
                        ++summary.budget_exhausted;
                    }
                }
            } catch (const std::exception& err) {
                // Journal writes can fail (disk full, file yanked); count the
                // record as errored rather than killing the whole run.
                std::lock_guard<std::mutex> lock(summary_mutex);
                ++summary.errors;
                if (warn) warn(job.record->id + ": journaling failed: " + err.what());
            }
        }
    };

    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(concurrency_limit), jobs.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& thread : pool) thread.join();
    }
    return summary;
}

}  // namespace runner_detail

// Fresh run over every dataset record. Individual record failures are
// journaled as record_error, not run failures; manifest and dataset problems
// fail fast.
inline RunSummary execute_run(const RunManifest& manifest, const WarnSink& warn = {}) {
    manifest.validate();
    const std::vector<TaskRecord> records =
        load_records(manifest.dataset_path, scenario_spec(manifest.scenario), warn);
    runner_detail::Runtime runtime = runner_detail::build_runtime(manifest, warn);

    JournalWriter writer(manifest.journal_path, manifest.run_id);
    writer.create(manifest.digest());

    std::vector<runner_detail::Job> jobs;
    jobs.reserve(records.size());
    for (const auto& record : records) jobs.push_back({&record, std::nullopt});

    RunSummary summary =
        runner_detail::run_jobs(jobs, runtime, manifest.concurrency_limit, writer, warn);
    summary.records_total = static_cast<int>(records.size());
    return summary;
}

// Continues an interrupted run from its journal: completed records are left
// untouched, every other record picks up at its first missing iteration.
inline RunSummary resume_run(const RunManifest& manifest, const WarnSink& warn = {}) {
    manifest.validate();
    const Journal journal = read_journal(manifest.journal_path, warn, /*repair=*/true);
    if (journal.meta.manifest_digest != manifest.digest()) {
        throw JournalMismatch("manifest digest " + manifest.digest() +
                              " does not match journal digest " + journal.meta.manifest_digest);
    }

    const std::vector<TaskRecord> records =
        load_records(manifest.dataset_path, scenario_spec(manifest.scenario), warn);
    runner_detail::Runtime runtime = runner_detail::build_runtime(manifest, warn);

    const auto states = journal.record_states();
    RunSummary summary;
    summary.records_total = static_cast<int>(records.size());

    std::vector<runner_detail::Job> jobs;
    for (const auto& record : records) {
        const auto it = states.find(record.id);
        if (it == states.end()) {
            jobs.push_back({&record, std::nullopt});
            continue;
        }
        const RecordJournalState& state = it->second;
        if (state.stop) {
            ++summary.already_done;
            if (*state.stop == StopReason::converged) ++summary.converged;
            if (*state.stop == StopReason::budget_exhausted) ++summary.budget_exhausted;
            continue;
        }
        if (state.last_iteration < 0) {
            jobs.push_back({&record, std::nullopt});
            continue;
        }
        ResumeState resume;
        resume.last_iteration = state.last_iteration;
        resume.persona = PersonaProfile{state.last_persona, state.last_iteration, std::nullopt};
        if (state.last_iteration >= 1) {
            resume.prev_persona =
                PersonaProfile{state.prev_persona, state.last_iteration - 1, std::nullopt};
        }
        resume.behavior_text = state.last_behavior;
        jobs.push_back({&record, std::move(resume)});
    }

    JournalWriter writer(manifest.journal_path, manifest.run_id);
    writer.open_for_append();
    const RunSummary fresh =
        runner_detail::run_jobs(jobs, runtime, manifest.concurrency_limit, writer, warn);
    summary.converged += fresh.converged;
    summary.budget_exhausted += fresh.budget_exhausted;
    summary.errors += fresh.errors;
    return summary;
}

// --- aggregation ---

inline const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = {"rouge_l_f1", "bertscore_f1",
                                                   "embedding_similarity"};
    return names;
}

struct MetricAggregate {
    std::string metric;
    std::vector<std::optional<double>> mean_by_iteration;  // index 0 = baseline
    std::optional<double> baseline;
    std::optional<double> final_value;
    std::optional<double> best_value;  // best per-iteration mean over t >= 1
    std::optional<int> best_iteration;
    std::optional<double> final_improvement_pct;  // unset when undefined/missing
    std::optional<double> best_improvement_pct;
    bool improvement_undefined = false;  // baseline is exactly zero
};

struct AggregateReport {
    std::string run_id;
    int record_count = 0;
    int max_iteration = 0;
    std::map<std::string, int> stop_reasons;
    std::vector<MetricAggregate> metrics;
};

// (value - baseline) / baseline * 100; undefined on a zero baseline.
inline std::optional<double> relative_improvement_pct(double value, double baseline) {
    if (baseline == 0.0) return std::nullopt;
    return (value - baseline) / baseline * 100.0;
}

// Per-iteration means with carry-forward: a record that stopped at iteration
// s contributes its iteration-s metrics to every later iteration.
inline AggregateReport aggregate(const std::string& journal_path, const WarnSink& warn = {}) {
    const Journal journal = read_journal(journal_path, warn);
    AggregateReport report;
    report.run_id = journal.meta.run_id;

    struct RecordSeries {
        std::map<int, MetricVector> by_iteration;
        std::optional<StopReason> stop;
    };
    std::map<std::string, RecordSeries> series;
    for (const auto& entry : journal.entries) {
        const std::string type = entry.value("type", "");
        const std::string record_id = entry.value("record_id", "");
        if (type == "iter") {
            series[record_id].by_iteration[entry.value("iteration", 0)] =
                journal_detail::metrics_from_json(entry.value("metrics", nlohmann::json::object()));
        } else if (type == "stop") {
            series[record_id].stop = parse_stop_reason(entry.value("stop_reason", ""));
        } else if (type == "error") {
            series[record_id].stop = StopReason::record_error;
        }
    }
    if (series.empty()) throw EmptyJournal("journal has no record entries: " + journal_path);

    report.record_count = static_cast<int>(series.size());
    int max_iteration = 0;
    for (const auto& [record_id, data] : series) {
        (void)record_id;
        if (!data.by_iteration.empty()) {
            max_iteration = std::max(max_iteration, data.by_iteration.rbegin()->first);
        }
        const StopReason reason = data.stop.value_or(StopReason::record_error);
        ++report.stop_reasons[std::string(stop_reason_name(reason))];
    }
    report.max_iteration = max_iteration;

    auto metric_value = [](const MetricVector& metrics,
                           const std::string& name) -> std::optional<double> {
        if (name == "rouge_l_f1") return metrics.rouge_l_f1;
        if (name == "bertscore_f1") return metrics.bertscore_f1;
        return metrics.embedding_similarity;
    };

    for (const auto& name : metric_names()) {
        MetricAggregate agg;
        agg.metric = name;
        for (int t = 0; t <= max_iteration; ++t) {
            double sum = 0.0;
            int count = 0;
            for (const auto& [record_id, data] : series) {
                (void)record_id;
                if (data.by_iteration.empty()) continue;
                // Carry forward: clamp t to the record's last iteration.
                auto it = data.by_iteration.upper_bound(t);
                if (it == data.by_iteration.begin()) continue;  // record starts later than t
                --it;
                if (const auto value = metric_value(it->second, name)) {
                    sum += *value;
                    ++count;
                }
            }
            agg.mean_by_iteration.push_back(
                count > 0 ? std::optional<double>(sum / count) : std::nullopt);
        }

        agg.baseline = agg.mean_by_iteration.empty() ? std::nullopt : agg.mean_by_iteration.front();
        if (!agg.mean_by_iteration.empty()) agg.final_value = agg.mean_by_iteration.back();
        for (int t = 1; t <= max_iteration; ++t) {
            const auto& value = agg.mean_by_iteration[static_cast<std::size_t>(t)];
            if (value && (!agg.best_value || *value > *agg.best_value)) {
                agg.best_value = value;
                agg.best_iteration = t;
            }
        }
        if (agg.baseline) {
            if (*agg.baseline == 0.0) {
                agg.improvement_undefined = agg.final_value.has_value() || agg.best_value.has_value();
            } else {
                if (agg.final_value) {
                    agg.final_improvement_pct = relative_improvement_pct(*agg.final_value, *agg.baseline);
                }
                if (agg.best_value) {
                    agg.best_improvement_pct = relative_improvement_pct(*agg.best_value, *agg.baseline);
                }
            }
        }
        report.metrics.push_back(std::move(agg));
    }
    return report;
}

// --- export ---

enum class ExportFormat { csv, tsv };

namespace runner_detail {

inline std::string format_value(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.2f", value);
    return buffer;
}

inline std::string format_mean(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6f", value);
    return buffer;
}

// Table cell "value(+pct%)" / "value(-pct%)" / "value(undefined)".
inline std::string comparison_cell(double value, std::optional<double> improvement_pct,
                                   bool undefined) {
    char buffer[96];
    if (improvement_pct) {
        std::snprintf(buffer, sizeof buffer, "%.2f(%+.2f%%)", value, *improvement_pct);
    } else if (undefined) {
        std::snprintf(buffer, sizeof buffer, "%.2f(undefined)", value);
    } else {
        std::snprintf(buffer, sizeof buffer, "%.2f", value);
    }
    return buffer;
}

}  // namespace runner_detail

struct ExportedFiles {
    std::string curves_path;
    std::string comparison_path;
};

// Writes the per-iteration curve table and the baseline/variant comparison
// table. Several reports may be passed to compare analysis variants side by
// side; the first report's baseline anchors the comparison.
inline ExportedFiles export_report(const std::vector<AggregateReport>& variants,
                                   const std::string& out_dir,
                                   ExportFormat format = ExportFormat::csv) {
    if (variants.empty()) throw InvalidRequest("export refused: no aggregate reports");
    for (const auto& report : variants) {
        if (report.record_count == 0) {
            throw InvalidRequest("export refused: report " + report.run_id + " has no records");
        }
    }
    const char delim = format == ExportFormat::csv ? ',' : '\t';
    const char* extension = format == ExportFormat::csv ? ".csv" : ".tsv";
    std::filesystem::create_directories(out_dir);

    ExportedFiles files;
    files.curves_path = out_dir + "/curves" + extension;
    {
        std::ofstream out(files.curves_path, std::ios::binary);
        if (!out) throw IoError("cannot write " + files.curves_path);
        out << "variant" << delim << "iteration";
        for (const auto& name : metric_names()) out << delim << name;
        out << '\n';
        for (const auto& report : variants) {
            for (int t = 0; t <= report.max_iteration; ++t) {
                out << report.run_id << delim << t;
                for (const auto& agg : report.metrics) {
                    out << delim;
                    const auto& value = agg.mean_by_iteration[static_cast<std::size_t>(t)];
                    if (value) out << runner_detail::format_mean(*value);
                }
                out << '\n';
            }
        }
    }

    files.comparison_path = out_dir + "/comparison" + extension;
    {
        std::ofstream out(files.comparison_path, std::ios::binary);
        if (!out) throw IoError("cannot write " + files.comparison_path);
        out << "metric" << delim << "statistic" << delim << "baseline";
        for (const auto& report : variants) out << delim << report.run_id;
        out << '\n';

        for (std::size_t m = 0; m < metric_names().size(); ++m) {
            for (const char* statistic : {"final", "best"}) {
                out << metric_names()[m] << delim << statistic << delim;
                const MetricAggregate& anchor = variants.front().metrics[m];
                if (anchor.baseline) out << runner_detail::format_value(*anchor.baseline);
                for (const auto& report : variants) {
                    const MetricAggregate& agg = report.metrics[m];
                    const bool is_final = statistic == std::string("final");
                    const auto value = is_final ? agg.final_value : agg.best_value;
                    const auto pct =
                        is_final ? agg.final_improvement_pct : agg.best_improvement_pct;
                    out << delim;
                    if (value) {
                        out << runner_detail::comparison_cell(*value, pct,
                                                              agg.improvement_undefined);
                    }
                }
                out << '\n';
            }
        }
    }
    return files;
}

}  // namespace dprf
