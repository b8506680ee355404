// Command-line front end: manifest-driven runs, journal aggregation, dataset
// validation, and bit-exact prompt rendering for auditing.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dprf/datasets.hpp"
#include "dprf/prompts.hpp"
#include "dprf/runner.hpp"

namespace {

dprf::WarnSink stderr_warn() {
    return [](const std::string& message) { std::cerr << "warning: " << message << "\n"; };
}

int cmd_run(const std::string& manifest_path, bool resume) {
    const dprf::RunManifest manifest = dprf::RunManifest::load(manifest_path);
    const dprf::RunSummary summary = resume ? dprf::resume_run(manifest, stderr_warn())
                                            : dprf::execute_run(manifest, stderr_warn());
    std::cout << "run " << manifest.run_id << ": " << summary.records_total << " records, "
              << summary.converged << " converged, " << summary.budget_exhausted
              << " budget_exhausted, " << summary.errors << " errors";
    if (summary.already_done > 0) {
        std::cout << " (" << summary.already_done << " already complete)";
    }
    std::cout << "\njournal: " << manifest.journal_path << "\n";
    return summary.errors == 0 ? 0 : 2;
}

int cmd_aggregate(const std::vector<std::string>& journals, const std::string& out_dir,
                  bool tsv) {
    std::vector<dprf::AggregateReport> reports;
    reports.reserve(journals.size());
    for (const auto& path : journals) {
        reports.push_back(dprf::aggregate(path, stderr_warn()));
    }
    const dprf::ExportedFiles files = dprf::export_report(
        reports, out_dir, tsv ? dprf::ExportFormat::tsv : dprf::ExportFormat::csv);

    for (const auto& report : reports) {
        std::cout << "variant " << report.run_id << ": " << report.record_count << " records, "
                  << report.max_iteration << " iterations\n";
        for (const auto& agg : report.metrics) {
            if (!agg.baseline) continue;
            std::cout << "  " << agg.metric << " baseline "
                      << dprf::runner_detail::format_value(*agg.baseline);
            if (agg.final_value) {
                std::cout << " final "
                          << dprf::runner_detail::comparison_cell(
                                 *agg.final_value, agg.final_improvement_pct,
                                 agg.improvement_undefined);
            }
            if (agg.best_value) {
                std::cout << " best "
                          << dprf::runner_detail::comparison_cell(*agg.best_value,
                                                                  agg.best_improvement_pct,
                                                                  agg.improvement_undefined);
            }
            std::cout << "\n";
        }
    }
    std::cout << "wrote " << files.curves_path << "\nwrote " << files.comparison_path << "\n";
    return 0;
}

int cmd_validate(const std::string& dataset, const std::string& scenario) {
    const dprf::ScenarioSpec& spec = dprf::scenario_spec_by_name(scenario);
    std::size_t warnings = 0;
    const auto records = dprf::load_records(dataset, spec, [&warnings](const std::string& message) {
        std::cerr << "warning: " << message << "\n";
        ++warnings;
    });
    std::cout << dataset << ": " << records.size() << " valid " << scenario << " records";
    if (warnings > 0) std::cout << " (" << warnings << " warnings)";
    std::cout << "\n";
    return 0;
}

int cmd_render(const std::string& template_id, const std::string& bindings_path,
               const std::string& templates_dir, bool corrected) {
    const dprf::PromptRegistry registry =
        !templates_dir.empty()
            ? dprf::PromptRegistry::from_directory(templates_dir)
            : dprf::PromptRegistry::builtin(corrected ? dprf::TemplateFidelity::corrected
                                                      : dprf::TemplateFidelity::pristine);
    std::ifstream in(bindings_path);
    if (!in) throw dprf::IoError("cannot open bindings file " + bindings_path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& ex) {
        throw dprf::ParseError(std::string("invalid bindings JSON: ") + ex.what(), 0);
    }
    if (!doc.is_object()) throw dprf::InvalidRequest("bindings file must hold a JSON object");

    dprf::Bindings bindings;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_string()) {
            throw dprf::InvalidRequest("binding \"" + key + "\" must be a string");
        }
        bindings[key] = value.get<std::string>();
    }
    std::cout << registry.render(dprf::parse_template_id(template_id), bindings);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic persona refinement engine"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Execute a manifest-driven experiment run");
    std::string manifest_path;
    bool resume = false;
    run->add_option("--manifest", manifest_path, "Run manifest JSON file")->required();
    run->add_flag("--resume", resume, "Continue an interrupted run from its journal");

    auto* agg = app.add_subcommand("aggregate", "Aggregate journals into report tables");
    std::vector<std::string> journals;
    std::string out_dir;
    bool tsv = false;
    agg->add_option("--journal", journals, "Journal file (repeat to compare variants)")
        ->required();
    agg->add_option("--out", out_dir, "Output directory for curve and comparison tables")
        ->required();
    agg->add_flag("--tsv", tsv, "Write tab-separated instead of comma-separated tables");

    auto* validate = app.add_subcommand("validate", "Validate a line-delimited dataset file");
    std::string dataset;
    std::string scenario;
    validate->add_option("--dataset", dataset, "Dataset file path")->required();
    validate
        ->add_option("--scenario", scenario,
                     "debate | depression | suicide | interview | movie_review")
        ->required();

    auto* render = app.add_subcommand("render-prompt", "Print a rendered prompt, bit-exact");
    std::string template_id;
    std::string bindings_path;
    std::string templates_dir;
    bool corrected = false;
    render->add_option("--template", template_id, "Template id, e.g. analysis_structured")
        ->required();
    render->add_option("--bindings", bindings_path, "JSON object of placeholder -> value")
        ->required();
    render->add_option("--templates", templates_dir, "Load templates from this asset directory");
    render->add_flag("--corrected", corrected, "Use the documented fixed-typo template set");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(manifest_path, resume);
        if (agg->parsed()) return cmd_aggregate(journals, out_dir, tsv);
        if (validate->parsed()) return cmd_validate(dataset, scenario);
        if (render->parsed()) return cmd_render(template_id, bindings_path, templates_dir, corrected);
    } catch (const dprf::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
