// loandet: detects lexical borrowings from a dominant donor language in a
// multilingual wordlist. Subcommands: detect, crossval, report, prepare.
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "loandet/classifier.hpp"
#include "loandet/detectors.hpp"
#include "loandet/errors.hpp"
#include "loandet/evaluation.hpp"
#include "loandet/phonology.hpp"
#include "loandet/tsv.hpp"
#include "loandet/version.hpp"
#include "loandet/wordlist.hpp"

namespace fs = std::filesystem;
using namespace loandet;

namespace {

struct RunConfig {
    std::string config_path;
    std::string wordlist_path;
    std::string donor_language;
    std::string method = "closest";
    std::string measure;  // ned | sca | both; empty means "default for method"
    std::optional<double> threshold;
    int folds = 10;
    std::uint64_t seed = 42;
    std::string loss_kind = "hinge";
    std::string class_weights = "uniform";
    std::string output_dir = "out";
    std::string sound_class_path;  // empty: built-in table
    std::string experiments = "main";
    std::string model_path;       // load instead of training (detect)
    std::string save_model_path;  // save after training (detect)
    std::string script_path = "scripts/prepare_dataset.py";
    std::string source_dir;  // prepare: downloaded export directory
};

// key=value config file; flags given on the command line take precedence,
// config values beat built-in defaults. Lines starting with # are comments.
void apply_config_file(CLI::App* cmd, RunConfig& config) {
    using Setter = std::function<void(RunConfig&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"wordlist", [](RunConfig& c, const std::string& v) { c.wordlist_path = v; }},
        {"donor", [](RunConfig& c, const std::string& v) { c.donor_language = v; }},
        {"method", [](RunConfig& c, const std::string& v) { c.method = v; }},
        {"measure", [](RunConfig& c, const std::string& v) { c.measure = v; }},
        {"threshold", [](RunConfig& c, const std::string& v) { c.threshold = std::stod(v); }},
        {"k", [](RunConfig& c, const std::string& v) { c.folds = std::stoi(v); }},
        {"seed", [](RunConfig& c, const std::string& v) { c.seed = std::stoull(v); }},
        {"loss", [](RunConfig& c, const std::string& v) { c.loss_kind = v; }},
        {"class-weights", [](RunConfig& c, const std::string& v) { c.class_weights = v; }},
        {"output-dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
        {"sound-classes", [](RunConfig& c, const std::string& v) { c.sound_class_path = v; }},
        {"experiments", [](RunConfig& c, const std::string& v) { c.experiments = v; }},
        {"model", [](RunConfig& c, const std::string& v) { c.model_path = v; }},
        {"save-model", [](RunConfig& c, const std::string& v) { c.save_model_path = v; }},
    };
    std::vector<std::string> lines = tsv::read_lines(config.config_path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty() || line[0] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(config.config_path + ":" + std::to_string(i + 1) +
                              ": expected key=value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto setter = setters.find(key);
        const CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (setter == setters.end() || opt == nullptr) {
            throw ConfigError(config.config_path + ": unknown key \"" + key + "\" for " +
                              cmd->get_name());
        }
        if (opt->count() > 0) continue;  // command line wins
        try {
            setter->second(config, value);
        } catch (const std::exception&) {
            throw ConfigError(config.config_path + ": bad value for " + key + ": " + value);
        }
    }
}

void flush_warnings(const std::vector<std::string>& warnings) {
    // Dedupe: segment warnings repeat across thousands of word pairs.
    std::vector<std::string> seen;
    for (const std::string& w : warnings) {
        if (std::find(seen.begin(), seen.end(), w) == seen.end()) {
            seen.push_back(w);
            std::cerr << "warning: " << w << "\n";
        }
    }
}

SoundClassModel load_model_table(const RunConfig& config) {
    if (config.sound_class_path.empty()) {
        return default_sound_class_model();
    }
    return load_sound_class_model(config.sound_class_path);
}

void write_manifest(const RunConfig& config, const std::string& command) {
    nlohmann::ordered_json j;
    j["tool"] = "loandet";
    j["version"] = kVersion;
    j["command"] = command;
    j["wordlist"] = config.wordlist_path;
    j["donor"] = config.donor_language;
    j["method"] = config.method;
    j["measure"] = config.measure;
    if (config.threshold) j["threshold"] = *config.threshold;
    j["folds"] = config.folds;
    j["seed"] = config.seed;
    j["loss_kind"] = config.loss_kind;
    j["class_weights"] = config.class_weights;
    j["output_dir"] = config.output_dir;
    j["sound_classes"] = config.sound_class_path.empty() ? "<built-in>" : config.sound_class_path;
    j["experiments"] = config.experiments;
    write_text_file((fs::path(config.output_dir) / "manifest.json").string(), j.dump(2) + "\n");
}

Measure parse_measure(const std::string& name) {
    if (name == "ned") return Measure::ned;
    if (name == "sca") return Measure::sca;
    throw ConfigError("measure must be ned or sca, got \"" + name + "\"");
}

void print_metrics(const MetricsReport& m) {
    auto opt = [](const std::optional<double>& v) {
        if (!v) return std::string("undefined");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", *v);
        return std::string(buf);
    };
    char buf[128];
    std::snprintf(buf, sizeof buf, "f1=%.4f accuracy=%.4f tp=%ld fp=%ld fn=%ld tn=%ld", m.f1,
                  m.accuracy, m.tp, m.fp, m.fn, m.tn);
    std::cout << "precision=" << opt(m.precision) << " recall=" << opt(m.recall) << " " << buf
              << "\n";
}

int cmd_detect(const RunConfig& config) {
    std::vector<std::string> warnings;
    Wordlist wl = load_wordlist(config.wordlist_path, config.donor_language, &warnings);
    SoundClassModel table = load_model_table(config);
    fs::create_directories(config.output_dir);

    std::vector<DistanceRecord> records = build_distance_records(wl, wl.concepts(), table);
    std::vector<Prediction> predictions;

    if (config.method == "closest" || config.method == "cognate") {
        std::string measure_name = config.measure.empty() ? "sca" : config.measure;
        if (measure_name == "both") {
            throw ConfigError("method " + config.method + " needs a single measure (ned or sca)");
        }
        Measure measure = parse_measure(measure_name);
        double theta = config.threshold ? *config.threshold
                                        : calibrate_threshold(records, measure);
        std::cout << "threshold=" << theta
                  << (config.threshold ? " (given)" : " (calibrated on all data)") << "\n";
        predictions = config.method == "closest"
                          ? detect_closest_match(records, measure, theta)
                          : detect_cognate_based(wl, wl.concepts(), measure, theta, table);
    } else if (config.method == "classifier") {
        if (!config.measure.empty() && config.measure != "both") {
            throw ConfigError("the classifier always uses both measures; pass --measure both");
        }
        if (config.threshold) {
            emit_warning(&warnings, "--threshold is ignored for the classifier");
        }
        FeatureSet features = featurize(records, wl.target_languages(), &warnings);
        LinearModel model;
        if (!config.model_path.empty()) {
            model = load_model(config.model_path);
        } else {
            TrainOptions options;
            options.seed = config.seed;
            model = train(features, loss_from_name(config.loss_kind),
                          class_weighting_from_name(config.class_weights), options);
        }
        if (!config.save_model_path.empty()) {
            save_model(model, config.save_model_path);
        }
        predictions = predict(model, features);
    } else {
        throw ConfigError("unknown method: " + config.method);
    }

    std::string predictions_path = (fs::path(config.output_dir) / "predictions.tsv").string();
    write_predictions_tsv(predictions_path, records, predictions);
    write_manifest(config, "detect");
    flush_warnings(warnings);

    MetricsReport metrics = score(predictions, records);
    print_metrics(metrics);
    std::cout << "predictions written to " << predictions_path << "\n";
    return 0;
}

std::vector<ExperimentConfig> select_experiments(const std::string& selection) {
    std::vector<ExperimentConfig> all = main_experiments();
    for (ExperimentConfig& config : adhoc_experiments()) all.push_back(config);
    if (selection == "main") {
        return main_experiments();
    }
    if (selection == "all") {
        return all;
    }
    std::vector<ExperimentConfig> chosen;
    std::string rest = selection;
    while (!rest.empty()) {
        std::size_t comma = rest.find(',');
        std::string label = rest.substr(0, comma);
        rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
        bool found = false;
        for (const ExperimentConfig& config : all) {
            if (config.label == label) {
                chosen.push_back(config);
                found = true;
                break;
            }
        }
        if (!found) {
            std::string known;
            for (const ExperimentConfig& config : all) known += " " + config.label;
            throw ConfigError("unknown experiment \"" + label + "\"; known:" + known);
        }
    }
    if (chosen.empty()) {
        throw ConfigError("no experiments selected");
    }
    return chosen;
}

int cmd_crossval(const RunConfig& config) {
    std::vector<std::string> warnings;
    Wordlist wl = load_wordlist(config.wordlist_path, config.donor_language, &warnings);
    SoundClassModel table = load_model_table(config);
    fs::create_directories(config.output_dir);

    // The fold plan is persisted so that every experiment and rerun uses the
    // same splits.
    fs::path plan_path = fs::path(config.output_dir) / "folds.json";
    FoldPlan plan;
    if (fs::exists(plan_path)) {
        try {
            plan = load_fold_plan(plan_path.string());
            validate_fold_plan(plan, wl);
        } catch (const Error& e) {
            throw ConfigError(std::string("persisted fold plan is unusable (") + e.what() +
                              "); delete " + plan_path.string() + " to regenerate");
        }
        if (plan.k != config.folds || plan.seed != config.seed) {
            throw ConfigError("persisted fold plan was built with k=" + std::to_string(plan.k) +
                              " seed=" + std::to_string(plan.seed) + "; delete " +
                              plan_path.string() + " to regenerate");
        }
    } else {
        plan = plan_folds(wl, config.folds, config.seed);
        save_fold_plan(plan, plan_path.string());
    }

    TrainOptions options;
    options.seed = config.seed;
    CrossValResult result =
        cross_validate(wl, plan, select_experiments(config.experiments), table, {}, options);

    write_text_file((fs::path(config.output_dir) / "summary.tsv").string(),
                    render_summary_tsv(result));
    write_text_file((fs::path(config.output_dir) / "per_fold.tsv").string(),
                    render_per_fold_tsv(result));
    write_text_file((fs::path(config.output_dir) / "anova.json").string(),
                    render_anova_json(result));

    // Wall-clock times are informational and deliberately kept out of the
    // deterministic summary files.
    nlohmann::ordered_json timings;
    for (const ExperimentResult& exp : result.experiments) {
        timings[exp.config.label] = exp.wall_ms;
    }
    write_text_file((fs::path(config.output_dir) / "timings.json").string(),
                    timings.dump(2) + "\n");
    write_manifest(config, "crossval");
    flush_warnings(warnings);

    std::cout << render_summary_tsv(result);
    for (const ExperimentResult& exp : result.experiments) {
        if (exp.failed) {
            std::cerr << "experiment " << exp.config.label << " failed: " << exp.failure << "\n";
        }
    }
    std::cout << "outputs written to " << config.output_dir << "\n";
    return 0;
}

int cmd_report(const RunConfig& config) {
    std::vector<std::string> warnings;
    Wordlist wl = load_wordlist(config.wordlist_path, config.donor_language, &warnings);
    SoundClassModel table = load_model_table(config);
    fs::create_directories(config.output_dir);

    std::vector<DistanceRecord> records = build_distance_records(wl, wl.concepts(), table);

    // Full-data run of the requested method (classifier by default).
    std::vector<Prediction> predictions;
    if (config.method == "classifier" || config.method.empty()) {
        FeatureSet features = featurize(records, wl.target_languages(), &warnings);
        LinearModel model;
        if (!config.model_path.empty()) {
            model = load_model(config.model_path);
        } else {
            TrainOptions options;
            options.seed = config.seed;
            model = train(features, loss_from_name(config.loss_kind),
                          class_weighting_from_name(config.class_weights), options);
        }
        predictions = predict(model, features);
    } else if (config.method == "closest" || config.method == "cognate") {
        std::string measure_name = config.measure.empty() ? "sca" : config.measure;
        Measure measure = parse_measure(measure_name);
        double theta =
            config.threshold ? *config.threshold : calibrate_threshold(records, measure);
        predictions = config.method == "closest"
                          ? detect_closest_match(records, measure, theta)
                          : detect_cognate_based(wl, wl.concepts(), measure, theta, table);
    } else {
        throw ConfigError("unknown method: " + config.method);
    }

    PerLanguageReport per_language = per_language_report(wl, records, predictions);
    write_text_file((fs::path(config.output_dir) / "per_language.tsv").string(),
                    render_per_language_tsv(per_language));
    std::vector<ErrorCandidate> errors = error_report(wl, records, predictions, table);
    write_text_file((fs::path(config.output_dir) / "error_report.tsv").string(),
                    render_error_report_tsv(errors));
    write_manifest(config, "report");
    flush_warnings(warnings);

    std::cout << render_per_language_tsv(per_language);
    std::cout << errors.size() << " error candidates written to "
              << (fs::path(config.output_dir) / "error_report.tsv").string() << "\n";
    return 0;
}

int cmd_prepare(const RunConfig& config) {
    // The engine never fetches data itself; the source export is downloaded
    // manually (see README) and converted by the bundled script.
    if (config.source_dir.empty()) {
        throw ConfigError("prepare needs --source <directory of the downloaded export>");
    }
    fs::path output = config.wordlist_path.empty() ? fs::path("data/wordlist.tsv")
                                                   : fs::path(config.wordlist_path);
    std::string cmd = "python3 '" + config.script_path + "' --source '" + config.source_dir +
                      "' --output '" + output.string() + "' --donor '" + config.donor_language +
                      "'";
    std::cerr << "running: " << cmd << "\n";
    int rc = std::system(cmd.c_str());
    if (rc != 0) {
        throw ConfigError("preparation script failed with status " + std::to_string(rc));
    }
    std::cout << "canonical wordlist written to " << output.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Borrowing detection from a dominant donor language in multilingual wordlists"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RunConfig config;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config.config_path,
                        "Config file (key=value); flags override it");
        // Presence is validated after parsing so that config files can
        // supply these too (required() would insist on the command line).
        cmd->add_option("--wordlist", config.wordlist_path, "Canonical wordlist TSV");
        cmd->add_option("--donor", config.donor_language, "Donor language identifier");
        cmd->add_option("--output-dir", config.output_dir, "Output directory")
            ->capture_default_str();
        cmd->add_option("--sound-classes", config.sound_class_path,
                        "Sound-class table TSV (default: built-in)");
        cmd->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
    };

    CLI::App* detect = app.add_subcommand("detect", "Run one method on the full wordlist");
    add_common(detect);
    detect->add_option("--method", config.method, "closest | cognate | classifier")
        ->capture_default_str();
    detect->add_option("--measure", config.measure, "ned | sca | both");
    detect->add_option("--threshold", config.threshold,
                       "Fixed decision threshold (skips calibration)");
    detect->add_option("--loss", config.loss_kind, "hinge | logistic")->capture_default_str();
    detect->add_option("--class-weights", config.class_weights, "uniform | balanced")
        ->capture_default_str();
    detect->add_option("--model", config.model_path, "Load a saved classifier model");
    detect->add_option("--save-model", config.save_model_path, "Save the trained classifier");

    CLI::App* crossval = app.add_subcommand("crossval", "Concept-blocked k-fold cross-validation");
    add_common(crossval);
    crossval->add_option("--k", config.folds, "Fold count")->capture_default_str();
    crossval->add_option("--experiments", config.experiments,
                         "main | all | comma-separated labels")
        ->capture_default_str();

    CLI::App* report = app.add_subcommand("report", "Per-language metrics and error candidates");
    add_common(report);
    report->add_option("--method", config.method, "closest | cognate | classifier")
        ->default_val("classifier");
    report->add_option("--measure", config.measure, "ned | sca (threshold methods)");
    report->add_option("--threshold", config.threshold, "Fixed threshold (skips calibration)");
    report->add_option("--loss", config.loss_kind, "hinge | logistic")->capture_default_str();
    report->add_option("--class-weights", config.class_weights, "uniform | balanced")
        ->capture_default_str();
    report->add_option("--model", config.model_path, "Load a saved classifier model");

    CLI::App* prepare =
        app.add_subcommand("prepare", "Convert a downloaded source export to the canonical TSV");
    prepare->add_option("--source", config.source_dir, "Directory of the downloaded export")
        ->required();
    prepare->add_option("--output", config.wordlist_path, "Output TSV path");
    prepare->add_option("--donor", config.donor_language, "Donor language name")
        ->default_val("Spanish");
    prepare->add_option("--script", config.script_path, "Preparation script path")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config.config_path.empty()) {
            for (CLI::App* cmd : {detect, crossval, report}) {
                if (cmd->parsed()) apply_config_file(cmd, config);
            }
        }
        if (!prepare->parsed() && (config.wordlist_path.empty() || config.donor_language.empty())) {
            throw ConfigError("--wordlist and --donor are required (flag or config file)");
        }
        if (detect->parsed()) return cmd_detect(config);
        if (crossval->parsed()) return cmd_crossval(config);
        if (report->parsed()) return cmd_report(config);
        if (prepare->parsed()) return cmd_prepare(config);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
