#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dprf/core.hpp"
#include "dprf/errors.hpp"
#include "dprf/loop.hpp"

namespace dprf {

namespace journal_detail {

inline nlohmann::json metrics_to_json(const MetricVector& metrics) {
    nlohmann::json out;
    out["rouge_l_f1"] = metrics.rouge_l_f1 ? nlohmann::json(*metrics.rouge_l_f1)
                                           : nlohmann::json(nullptr);
    out["bertscore_f1"] = metrics.bertscore_f1 ? nlohmann::json(*metrics.bertscore_f1)
                                               : nlohmann::json(nullptr);
    out["embedding_similarity"] = metrics.embedding_similarity
                                      ? nlohmann::json(*metrics.embedding_similarity)
                                      : nlohmann::json(nullptr);
    return out;
}

inline MetricVector metrics_from_json(const nlohmann::json& doc) {
    MetricVector metrics;
    auto read = [&doc](const char* key) -> std::optional<double> {
        if (doc.contains(key) && doc[key].is_number()) return doc[key].get<double>();
        return std::nullopt;
    };
    metrics.rouge_l_f1 = read("rouge_l_f1");
    metrics.bertscore_f1 = read("bertscore_f1");
    metrics.embedding_similarity = read("embedding_similarity");
    return metrics;
}

}  // namespace journal_detail

// Serialized writer over an append-only line journal. Every line is one JSON
// object terminated by a newline and flushed immediately, so a crash can lose
// at most a partial trailing line.
class JournalWriter {
public:
    JournalWriter(std::string path, std::string run_id) : path_(std::move(path)), run_id_(std::move(run_id)) {}

    // Creates a fresh journal; refuses to clobber an existing one.
    void create(const std::string& manifest_digest) {
        std::lock_guard<std::mutex> lock(mutex_);
        if (std::filesystem::exists(path_)) {
            throw IoError("journal already exists: " + path_ + " (resume instead)");
        }
        const auto parent = std::filesystem::path(path_).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        out_.open(path_, std::ios::binary | std::ios::app);
        if (!out_) throw IoError("cannot create journal " + path_);
        nlohmann::json meta = {{"type", "meta"},
                               {"run_id", run_id_},
                               {"manifest_digest", manifest_digest},
                               {"created_at", utc_timestamp()}};
        write_line(meta);
    }

    void open_for_append() {
        std::lock_guard<std::mutex> lock(mutex_);
        out_.open(path_, std::ios::binary | std::ios::app);
        if (!out_) throw IoError("cannot open journal " + path_);
    }

    void append_iteration(const std::string& record_id, const IterationRecord& step) {
        nlohmann::json entry = {
            {"type", "iter"},
            {"run_id", run_id_},
            {"record_id", record_id},
            {"iteration", step.iteration},
            {"persona_before_digest", step.persona_before.digest()},
            {"persona_after", step.persona_after.text},
            {"behavior", step.behavior.text},
            {"analysis", step.report.text},
            {"analysis_mode", std::string(analysis_mode_name(step.report.mode))},
            {"metrics", journal_detail::metrics_to_json(step.metrics)},
            {"flags", step.metric_flags},
            {"refinement_rejected", step.refinement_rejected},
            {"chat_calls", step.usage.chat_calls},
            {"chat_attempts", step.usage.chat_attempts},
            {"prompt_tokens", step.usage.prompt_tokens},
            {"completion_tokens", step.usage.completion_tokens},
            {"started_at", step.started_at},
            {"ended_at", step.ended_at},
        };
        std::lock_guard<std::mutex> lock(mutex_);
        write_line(entry);
    }

    void append_stop(const std::string& record_id, int iteration, StopReason reason) {
        nlohmann::json entry = {{"type", "stop"},
                                {"run_id", run_id_},
                                {"record_id", record_id},
                                {"iteration", iteration},
                                {"stop_reason", std::string(stop_reason_name(reason))},
                                {"ts", utc_timestamp()}};
        std::lock_guard<std::mutex> lock(mutex_);
        write_line(entry);
    }

    void append_error(const std::string& record_id, int iteration, const std::string& message) {
        nlohmann::json entry = {{"type", "error"},
                                {"run_id", run_id_},
                                {"record_id", record_id},
                                {"iteration", iteration},
                                {"message", message},
                                {"ts", utc_timestamp()}};
        std::lock_guard<std::mutex> lock(mutex_);
        write_line(entry);
    }

    const std::string& path() const { return path_; }

private:
    void write_line(const nlohmann::json& entry) {
        if (!out_.is_open()) throw IoError("journal writer not open");
        out_ << entry.dump() << '\n';
        out_.flush();
        if (!out_) throw IoError("journal write failed: " + path_);
    }

    std::string path_;
    std::string run_id_;
    std::ofstream out_;
    std::mutex mutex_;
};

struct JournalMeta {
    std::string run_id;
    std::string manifest_digest;
    std::string created_at;
};

// Where one record stands in a journal: last contiguous iteration, the
// persona texts needed to continue, and whether a stop was recorded.
struct RecordJournalState {
    int last_iteration = -1;
    std::string last_persona;
    std::string prev_persona;  // persona_after at last_iteration - 1
    std::string last_behavior;
    std::optional<StopReason> stop;
    bool errored = false;
};

struct Journal {
    JournalMeta meta;
    std::vector<nlohmann::json> entries;  // everything after the meta line
    bool truncated_partial_line = false;

    std::map<std::string, RecordJournalState> record_states() const {
        std::map<std::string, RecordJournalState> states;
        std::map<std::string, std::map<int, const nlohmann::json*>> iters;
        for (const auto& entry : entries) {
            const std::string type = entry.value("type", "");
            const std::string record_id = entry.value("record_id", "");
            if (type == "iter") {
                const int iteration = entry.value("iteration", -1);
                if (!iters[record_id].emplace(iteration, &entry).second) {
                    throw IoError("journal has duplicate iteration " + std::to_string(iteration) +
                                  " for record " + record_id);
                }
            } else if (type == "stop") {
                const auto reason = parse_stop_reason(entry.value("stop_reason", ""));
                if (!reason) throw IoError("journal has unknown stop reason for " + record_id);
                states[record_id].stop = *reason;
            } else if (type == "error") {
                states[record_id].errored = true;
            }
        }
        for (auto& [record_id, by_iteration] : iters) {
            RecordJournalState& state = states[record_id];
            int expected = 0;
            for (const auto& [iteration, entry] : by_iteration) {
                if (iteration != expected) {
                    throw IoError("journal iterations not contiguous for record " + record_id);
                }
                state.prev_persona = state.last_persona;
                state.last_persona = entry->value("persona_after", "");
                state.last_behavior = entry->value("behavior", "");
                state.last_iteration = iteration;
                ++expected;
            }
        }
        return states;
    }
};

// Reads a journal, dropping an unterminated or unparseable trailing line.
// With repair = true (resume path) the file is also truncated so appends
// stay clean; aggregation reads never touch the file. Corruption anywhere
// but the tail is a hard error.
inline Journal read_journal(const std::string& path, const WarnSink& warn = {},
                            bool repair = false) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open journal " + path);
    std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();

    Journal journal;
    std::vector<std::pair<std::size_t, std::string>> lines;  // offset, text
    std::size_t pos = 0;
    while (pos < contents.size()) {
        const std::size_t nl = contents.find('\n', pos);
        if (nl == std::string::npos) {
            journal.truncated_partial_line = true;
            if (warn) warn("journal has an unterminated trailing line; truncating it");
            break;
        }
        lines.emplace_back(pos, contents.substr(pos, nl - pos));
        pos = nl + 1;
    }

    if (journal.truncated_partial_line && repair) {
        std::filesystem::resize_file(path, pos);
    }
    if (lines.empty()) throw EmptyJournal("journal has no complete entries: " + path);

    for (std::size_t i = 0; i < lines.size(); ++i) {
        nlohmann::json entry;
        try {
            entry = nlohmann::json::parse(lines[i].second);
        } catch (const nlohmann::json::exception&) {
            if (i + 1 == lines.size()) {
                // Final line is complete but unparseable: same crash tail case.
                journal.truncated_partial_line = true;
                if (warn) warn("journal has a corrupted trailing line; truncating it");
                if (repair) std::filesystem::resize_file(path, lines[i].first);
                break;
            }
            throw IoError("journal corrupted at line " + std::to_string(i + 1) + ": " + path);
        }
        if (i == 0) {
            if (entry.value("type", "") != "meta") {
                throw IoError("journal missing meta header: " + path);
            }
            journal.meta.run_id = entry.value("run_id", "");
            journal.meta.manifest_digest = entry.value("manifest_digest", "");
            journal.meta.created_at = entry.value("created_at", "");
        } else {
            journal.entries.push_back(std::move(entry));
        }
    }
    if (journal.meta.manifest_digest.empty()) {
        throw EmptyJournal("journal has no usable meta header: " + path);
    }
    return journal;
}

}  // namespace dprf
