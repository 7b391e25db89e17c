#include "loandet/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "loandet/errors.hpp"

namespace loandet {

const char* method_name(Method m) {
    switch (m) {
        case Method::closest: return "closest";
        case Method::cognate: return "cognate";
        case Method::classifier: return "classifier";
    }
    return "?";
}

FoldPlan plan_folds(const Wordlist& wl, int k, std::uint64_t seed) {
    if (k < 2) {
        throw ConfigError("fold count must be at least 2");
    }
    std::vector<std::string> concepts = wl.concepts();
    if (static_cast<std::size_t>(k) > concepts.size()) {
        throw ConfigError("fold count " + std::to_string(k) + " exceeds concept count " +
                          std::to_string(concepts.size()));
    }
    // Hand-rolled Fisher-Yates: std::shuffle is not reproducible across
    // standard library implementations, and the plan must be.
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i + 1 < concepts.size(); ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng() % (concepts.size() - i));
        std::swap(concepts[i], concepts[j]);
    }
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.folds.assign(k, {});
    for (std::size_t i = 0; i < concepts.size(); ++i) {
        plan.folds[i % k].push_back(concepts[i]);
    }
    return plan;
}

void save_fold_plan(const FoldPlan& plan, const std::string& path) {
    nlohmann::ordered_json j;
    j["schema"] = "loandet-fold-plan/1";
    j["k"] = plan.k;
    j["seed"] = plan.seed;
    j["folds"] = plan.folds;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write file: " + path);
    }
    out << j.dump(2) << "\n";
}

FoldPlan load_fold_plan(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed fold plan " + path + ": " + e.what());
    }
    if (!j.contains("schema") || j["schema"] != "loandet-fold-plan/1") {
        throw DataError("fold plan " + path + " has an unsupported schema tag");
    }
    FoldPlan plan;
    plan.k = j.at("k").get<int>();
    plan.seed = j.at("seed").get<std::uint64_t>();
    plan.folds = j.at("folds").get<std::vector<std::vector<std::string>>>();
    return plan;
}

void validate_fold_plan(const FoldPlan& plan, const Wordlist& wl) {
    if (plan.k < 2 || plan.folds.size() != static_cast<std::size_t>(plan.k)) {
        throw ConfigError("fold plan is corrupted: k does not match the fold list");
    }
    std::set<std::string> seen;
    std::size_t total = 0;
    std::size_t min_size = SIZE_MAX, max_size = 0;
    for (const auto& fold : plan.folds) {
        min_size = std::min(min_size, fold.size());
        max_size = std::max(max_size, fold.size());
        for (const std::string& concept_id : fold) {
            if (!seen.insert(concept_id).second) {
                throw ConfigError("fold plan is corrupted: concept " + concept_id +
                                  " appears in two folds");
            }
            if (!wl.has_concept(concept_id)) {
                throw ConfigError("fold plan does not match the wordlist: unknown concept " +
                                  concept_id);
            }
            ++total;
        }
    }
    if (total != wl.concepts().size()) {
        throw ConfigError("fold plan does not cover the wordlist's concepts");
    }
    if (max_size - min_size > 1) {
        throw ConfigError("fold plan is corrupted: fold sizes differ by more than 1");
    }
}

MetricsReport score(const std::vector<Prediction>& predictions,
                    const std::vector<DistanceRecord>& gold) {
    if (predictions.size() != gold.size()) {
        throw ShapeError("predictions and gold records differ in length");
    }
    std::unordered_map<std::string, bool> gold_by_id;
    gold_by_id.reserve(gold.size());
    for (const DistanceRecord& rec : gold) gold_by_id.emplace(rec.form_id, rec.gold);

    MetricsReport report;
    std::unordered_set<std::string> seen;
    for (const Prediction& p : predictions) {
        auto it = gold_by_id.find(p.form_id);
        if (it == gold_by_id.end() || !seen.insert(p.form_id).second) {
            throw ShapeError("prediction/gold key mismatch at form id: " + p.form_id);
        }
        if (p.predicted && it->second) ++report.tp;
        if (p.predicted && !it->second) ++report.fp;
        if (!p.predicted && it->second) ++report.fn;
        if (!p.predicted && !it->second) ++report.tn;
    }
    if (report.tp + report.fp > 0) {
        report.precision = static_cast<double>(report.tp) / (report.tp + report.fp);
    }
    if (report.tp + report.fn > 0) {
        report.recall = static_cast<double>(report.tp) / (report.tp + report.fn);
    }
    if (report.precision && report.recall && *report.precision + *report.recall > 0) {
        report.f1 = 2 * *report.precision * *report.recall / (*report.precision + *report.recall);
    }
    report.accuracy =
        report.total() > 0 ? static_cast<double>(report.tp + report.tn) / report.total() : 0.0;
    return report;
}

std::vector<ExperimentConfig> main_experiments() {
    std::vector<ExperimentConfig> configs;
    configs.push_back({"closest-ned", Method::closest, Measure::ned, LossKind::hinge,
                       ClassWeighting::uniform, false, std::nullopt});
    configs.push_back({"closest-sca", Method::closest, Measure::sca, LossKind::hinge,
                       ClassWeighting::uniform, false, std::nullopt});
    configs.push_back({"cognate-ned", Method::cognate, Measure::ned, LossKind::hinge,
                       ClassWeighting::uniform, false, std::nullopt});
    configs.push_back({"cognate-sca", Method::cognate, Measure::sca, LossKind::hinge,
                       ClassWeighting::uniform, false, std::nullopt});
    configs.push_back({"classifier", Method::classifier, std::nullopt, LossKind::hinge,
                       ClassWeighting::uniform, false, std::nullopt});
    return configs;
}

std::vector<ExperimentConfig> adhoc_experiments() {
    std::vector<ExperimentConfig> configs;
    configs.push_back({"classifier-logistic", Method::classifier, std::nullopt, LossKind::logistic,
                       ClassWeighting::uniform, false, std::nullopt});
    configs.push_back({"classifier-balanced", Method::classifier, std::nullopt, LossKind::hinge,
                       ClassWeighting::balanced, false, std::nullopt});
    configs.push_back({"closest-sca-each-language", Method::closest, Measure::sca, LossKind::hinge,
                       ClassWeighting::uniform, true, std::nullopt});
    return configs;
}

namespace {

void validate_experiment(const ExperimentConfig& config) {
    if (config.method == Method::classifier) {
        if (config.measure.has_value()) {
            throw ConfigError("experiment " + config.label +
                              ": the classifier always uses both measures");
        }
    } else if (!config.measure.has_value()) {
        throw ConfigError("experiment " + config.label + ": a measure is required");
    }
}

SummaryRow summarize_folds(const std::string& label, const std::vector<MetricsReport>& folds) {
    SummaryRow row;
    row.label = label;
    // Fold means; precision/recall folds where the value is undefined are
    // skipped in their means.
    double p_sum = 0, r_sum = 0;
    std::size_t p_n = 0, r_n = 0;
    for (const MetricsReport& m : folds) {
        if (m.precision) {
            p_sum += *m.precision;
            ++p_n;
        }
        if (m.recall) {
            r_sum += *m.recall;
            ++r_n;
        }
        row.f1 += m.f1;
        row.accuracy += m.accuracy;
    }
    if (!folds.empty()) {
        row.f1 /= folds.size();
        row.accuracy /= folds.size();
    }
    row.precision = p_n ? p_sum / p_n : 0.0;
    row.recall = r_n ? r_sum / r_n : 0.0;
    return row;
}

}  // namespace

CrossValResult cross_validate(const Wordlist& wl, const FoldPlan& plan,
                              const std::vector<ExperimentConfig>& experiments,
                              const SoundClassModel& model, const AlignmentScoreScheme& scheme,
                              const TrainOptions& options) {
    validate_fold_plan(plan, wl);
    for (const ExperimentConfig& config : experiments) validate_experiment(config);

    std::vector<DistanceRecord> all_records =
        build_distance_records(wl, wl.concepts(), model, scheme);

    std::unordered_map<std::string, int> fold_of_concept;
    for (int f = 0; f < plan.k; ++f) {
        for (const std::string& concept_id : plan.folds[f]) fold_of_concept[concept_id] = f;
    }
    std::vector<std::vector<DistanceRecord>> fold_records(plan.k);
    for (const DistanceRecord& rec : all_records) {
        fold_records[fold_of_concept.at(rec.concept_id)].push_back(rec);
    }

    CrossValResult result;
    result.plan = plan;
    for (const ExperimentConfig& config : experiments) {
        ExperimentResult exp;
        exp.config = config;
        auto started = std::chrono::steady_clock::now();
        try {
            for (int f = 0; f < plan.k; ++f) {
                std::vector<DistanceRecord> train_records;
                train_records.reserve(all_records.size() - fold_records[f].size());
                for (int g = 0; g < plan.k; ++g) {
                    if (g == f) continue;
                    train_records.insert(train_records.end(), fold_records[g].begin(),
                                         fold_records[g].end());
                }
                const std::vector<DistanceRecord>& test_records = fold_records[f];

                std::vector<Prediction> predictions;
                switch (config.method) {
                    case Method::closest: {
                        if (config.per_language_thresholds) {
                            predictions = detect_per_language_closest(train_records, test_records,
                                                                      *config.measure);
                        } else {
                            double theta =
                                config.fixed_threshold.has_value()
                                    ? *config.fixed_threshold
                                    : calibrate_threshold(train_records, *config.measure);
                            predictions = detect_closest_match(test_records, *config.measure, theta);
                        }
                        break;
                    }
                    case Method::cognate: {
                        double theta = config.fixed_threshold.has_value()
                                           ? *config.fixed_threshold
                                           : calibrate_threshold(train_records, *config.measure);
                        predictions = detect_cognate_based(wl, plan.folds[f], *config.measure,
                                                           theta, model, scheme);
                        break;
                    }
                    case Method::classifier: {
                        FeatureSet train_features = featurize(train_records, wl.target_languages());
                        LinearModel trained =
                            train(train_features, config.loss, config.class_weighting, options);
                        FeatureSet test_features = featurize(test_records, wl.target_languages());
                        predictions = predict(trained, test_features);
                        break;
                    }
                }
                MetricsReport metrics = score(predictions, test_records);
                metrics.experiment = config.label;
                metrics.scope = "fold-" + std::to_string(f + 1);
                exp.fold_metrics.push_back(std::move(metrics));
            }
            exp.summary = summarize_folds(config.label, exp.fold_metrics);
        } catch (const Error& e) {
            exp.failed = true;
            exp.failure = e.what();
            exp.fold_metrics.clear();
        }
        exp.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                                started)
                          .count();
        result.experiments.push_back(std::move(exp));
    }
    return result;
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 300;
    constexpr double kEps = 1e-12;
    constexpr double kTiny = 1e-300;

    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw DomainError("incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (a <= 0 || b <= 0) {
        throw DomainError("incomplete beta requires positive shape parameters");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                      b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

AnovaResult blocked_anova(const std::vector<std::vector<double>>& scores) {
    const std::size_t m = scores.size();
    if (m < 2) {
        throw DomainError("blocked ANOVA needs at least two experiments");
    }
    const std::size_t b = scores[0].size();
    if (b < 2) {
        throw DomainError("blocked ANOVA needs at least two folds");
    }
    for (const auto& row : scores) {
        if (row.size() != b) {
            throw ShapeError("blocked ANOVA needs a complete experiments x folds matrix");
        }
    }

    double grand = 0.0;
    for (const auto& row : scores) {
        for (double y : row) grand += y;
    }
    grand /= static_cast<double>(m * b);

    double ss_treatment = 0.0;
    for (const auto& row : scores) {
        double mean = 0.0;
        for (double y : row) mean += y;
        mean /= b;
        ss_treatment += (mean - grand) * (mean - grand);
    }
    ss_treatment *= b;

    double ss_block = 0.0;
    for (std::size_t j = 0; j < b; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < m; ++i) mean += scores[i][j];
        mean /= m;
        ss_block += (mean - grand) * (mean - grand);
    }
    ss_block *= m;

    double ss_total = 0.0;
    for (const auto& row : scores) {
        for (double y : row) ss_total += (y - grand) * (y - grand);
    }
    double ss_error = std::max(0.0, ss_total - ss_treatment - ss_block);

    AnovaResult result;
    result.df_treatment = static_cast<int>(m) - 1;
    result.df_error = static_cast<int>((m - 1) * (b - 1));

    // No treatment variation at all: F is 0 by definition, whatever the
    // error term looks like.
    if (ss_treatment == 0.0) {
        result.f_statistic = 0.0;
        result.p_value = 1.0;
        return result;
    }
    if (ss_error <= 0.0) {
        throw DomainError("blocked ANOVA: zero error variance (all residuals are 0)");
    }
    double ms_treatment = ss_treatment / result.df_treatment;
    double ms_error = ss_error / result.df_error;
    result.f_statistic = ms_treatment / ms_error;
    double d1 = result.df_treatment, d2 = result.df_error;
    result.p_value = incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * result.f_statistic));
    return result;
}

std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) {
        throw ShapeError("pearson: input lengths differ");
    }
    const std::size_t n = xs.size();
    if (n < 2) return std::nullopt;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

PerLanguageReport per_language_report(const Wordlist& wl,
                                      const std::vector<DistanceRecord>& records,
                                      const std::vector<Prediction>& predictions) {
    std::unordered_map<std::string, const Prediction*> pred_by_id;
    for (const Prediction& p : predictions) pred_by_id[p.form_id] = &p;

    std::unordered_map<std::string, std::pair<std::vector<DistanceRecord>, std::vector<Prediction>>>
        by_language;
    for (const DistanceRecord& rec : records) {
        auto it = pred_by_id.find(rec.form_id);
        if (it == pred_by_id.end()) {
            throw ShapeError("no prediction for form id: " + rec.form_id);
        }
        auto& bucket = by_language[rec.language];
        bucket.first.push_back(rec);
        bucket.second.push_back(*it->second);
    }

    PerLanguageReport report;
    for (const std::string& language : wl.target_languages()) {
        auto it = by_language.find(language);
        if (it == by_language.end()) continue;
        LanguageReport lr;
        lr.language = language;
        lr.metrics = score(it->second.second, it->second.first);
        lr.metrics.scope = language;
        lr.borrowing_rate = wl.borrowing_rate(language);
        report.micro.tp += lr.metrics.tp;
        report.micro.fp += lr.metrics.fp;
        report.micro.fn += lr.metrics.fn;
        report.micro.tn += lr.metrics.tn;
        report.languages.push_back(std::move(lr));
    }

    if (report.micro.tp + report.micro.fp > 0) {
        report.micro.precision =
            static_cast<double>(report.micro.tp) / (report.micro.tp + report.micro.fp);
    }
    if (report.micro.tp + report.micro.fn > 0) {
        report.micro.recall =
            static_cast<double>(report.micro.tp) / (report.micro.tp + report.micro.fn);
    }
    if (report.micro.precision && report.micro.recall &&
        *report.micro.precision + *report.micro.recall > 0) {
        report.micro.f1 = 2 * *report.micro.precision * *report.micro.recall /
                          (*report.micro.precision + *report.micro.recall);
    }
    report.micro.accuracy = report.micro.total() > 0
                                ? static_cast<double>(report.micro.tp + report.micro.tn) /
                                      report.micro.total()
                                : 0.0;
    report.micro.scope = "micro";

    report.macro.label = "macro";
    std::vector<double> precisions, recalls, f1s, accuracies, rates;
    std::vector<double> p_rates, r_rates;
    for (const LanguageReport& lr : report.languages) {
        f1s.push_back(lr.metrics.f1);
        accuracies.push_back(lr.metrics.accuracy);
        rates.push_back(lr.borrowing_rate);
        if (lr.metrics.precision) {
            precisions.push_back(*lr.metrics.precision);
            p_rates.push_back(lr.borrowing_rate);
        }
        if (lr.metrics.recall) {
            recalls.push_back(*lr.metrics.recall);
            r_rates.push_back(lr.borrowing_rate);
        }
    }
    auto mean = [](const std::vector<double>& v) {
        if (v.empty()) return 0.0;
        double s = 0;
        for (double x : v) s += x;
        return s / v.size();
    };
    report.macro.precision = mean(precisions);
    report.macro.recall = mean(recalls);
    report.macro.f1 = mean(f1s);
    report.macro.accuracy = mean(accuracies);

    report.precision_rate_r = pearson(precisions, p_rates);
    report.recall_rate_r = pearson(recalls, r_rates);
    report.f1_rate_r = pearson(f1s, rates);
    report.accuracy_rate_r = pearson(accuracies, rates);
    return report;
}

std::vector<ErrorCandidate> error_report(const Wordlist& wl,
                                         const std::vector<DistanceRecord>& records,
                                         const std::vector<Prediction>& predictions,
                                         const SoundClassModel& model,
                                         const AlignmentScoreScheme& scheme) {
    std::unordered_map<std::string, const Prediction*> pred_by_id;
    for (const Prediction& p : predictions) pred_by_id[p.form_id] = &p;
    std::unordered_map<std::string, const WordForm*> form_by_id;
    for (const WordForm& f : wl.forms()) form_by_id[f.id] = &f;

    std::vector<ErrorCandidate> candidates;
    for (const DistanceRecord& rec : records) {
        auto pit = pred_by_id.find(rec.form_id);
        if (pit == pred_by_id.end()) {
            throw ShapeError("no prediction for form id: " + rec.form_id);
        }
        const Prediction& p = *pit->second;
        if (p.predicted == rec.gold) continue;

        ErrorCandidate cand;
        cand.false_negative = rec.gold;
        cand.form = form_by_id.at(rec.form_id);
        cand.score = p.score;
        cand.ned_min = rec.ned_min;
        cand.sca_min = rec.sca_min;

        ConceptView view = wl.concept_view(rec.concept_id);
        double best = std::numeric_limits<double>::infinity();
        for (const WordForm* donor : view.donor_forms) {
            double d = rec.sca_min ? sca_distance(cand.form->segments, donor->segments, model, scheme)
                                   : ned(cand.form->segments, donor->segments);
            if (d < best) {
                best = d;
                cand.nearest_donor = donor;
            }
        }
        candidates.push_back(std::move(cand));
    }

    auto sort_distance = [](const ErrorCandidate& c) {
        if (c.sca_min) return *c.sca_min;
        if (c.ned_min) return *c.ned_min;
        return 1.0;  // donor gap: the hardest cases float to the top
    };
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const ErrorCandidate& a, const ErrorCandidate& b) {
                         if (a.false_negative != b.false_negative) return a.false_negative;
                         double da = sort_distance(a), db = sort_distance(b);
                         if (da != db) return da > db;
                         return a.form->id < b.form->id;
                     });
    return candidates;
}

namespace {

std::string fmt(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    return buf;
}

std::string fmt_opt(const std::optional<double>& value) {
    return value ? fmt(*value) : "";
}

std::vector<const ExperimentResult*> sorted_experiments(const CrossValResult& result) {
    std::vector<const ExperimentResult*> out;
    for (const ExperimentResult& exp : result.experiments) out.push_back(&exp);
    std::sort(out.begin(), out.end(), [](const ExperimentResult* a, const ExperimentResult* b) {
        return a->config.label < b->config.label;
    });
    return out;
}

}  // namespace

std::string render_summary_tsv(const CrossValResult& result) {
    // F1_VS_MEAN: each experiment's fold-mean F1 against the grand mean of
    // the run, signed.
    double grand = 0.0;
    std::size_t n = 0;
    for (const ExperimentResult& exp : result.experiments) {
        if (!exp.failed) {
            grand += exp.summary.f1;
            ++n;
        }
    }
    if (n > 0) grand /= n;

    std::string out = "EXPERIMENT\tPRECISION\tRECALL\tF1\tACCURACY\tF1_VS_MEAN\tSTATUS\n";
    for (const ExperimentResult* exp : sorted_experiments(result)) {
        if (exp->failed) {
            out += exp->config.label + "\t\t\t\t\t\tfailed: " + exp->failure + "\n";
            continue;
        }
        char delta[32];
        std::snprintf(delta, sizeof delta, "%+.4f", exp->summary.f1 - grand);
        out += exp->config.label + "\t" + fmt(exp->summary.precision) + "\t" +
               fmt(exp->summary.recall) + "\t" + fmt(exp->summary.f1) + "\t" +
               fmt(exp->summary.accuracy) + "\t" + delta + "\tok\n";
    }
    return out;
}

std::string render_per_fold_tsv(const CrossValResult& result) {
    std::string out = "EXPERIMENT\tFOLD\tTP\tFP\tFN\tTN\tPRECISION\tRECALL\tF1\tACCURACY\n";
    for (const ExperimentResult* exp : sorted_experiments(result)) {
        for (const MetricsReport& m : exp->fold_metrics) {
            out += exp->config.label + "\t" + m.scope + "\t" + std::to_string(m.tp) + "\t" +
                   std::to_string(m.fp) + "\t" + std::to_string(m.fn) + "\t" +
                   std::to_string(m.tn) + "\t" + fmt_opt(m.precision) + "\t" + fmt_opt(m.recall) +
                   "\t" + fmt(m.f1) + "\t" + fmt(m.accuracy) + "\n";
        }
    }
    return out;
}

std::string render_anova_json(const CrossValResult& result) {
    nlohmann::ordered_json j;
    std::vector<const ExperimentResult*> experiments;
    for (const ExperimentResult& exp : result.experiments) {
        if (!exp.failed) experiments.push_back(&exp);
    }
    struct MetricSpec {
        const char* name;
        std::function<double(const MetricsReport&)> get;
    };
    const MetricSpec specs[] = {
        {"precision", [](const MetricsReport& m) { return m.precision.value_or(0.0); }},
        {"recall", [](const MetricsReport& m) { return m.recall.value_or(0.0); }},
        {"f1", [](const MetricsReport& m) { return m.f1; }},
        {"accuracy", [](const MetricsReport& m) { return m.accuracy; }},
    };
    for (const MetricSpec& spec : specs) {
        if (experiments.size() < 2) {
            j[spec.name] = {{"error", "needs at least two experiments"}};
            continue;
        }
        std::vector<std::vector<double>> matrix;
        for (const ExperimentResult* exp : experiments) {
            std::vector<double> row;
            for (const MetricsReport& m : exp->fold_metrics) row.push_back(spec.get(m));
            matrix.push_back(std::move(row));
        }
        try {
            AnovaResult anova = blocked_anova(matrix);
            j[spec.name] = {{"f_statistic", anova.f_statistic},
                            {"df_treatment", anova.df_treatment},
                            {"df_error", anova.df_error},
                            {"p_value", anova.p_value}};
        } catch (const Error& e) {
            j[spec.name] = {{"error", e.what()}};
        }
    }
    return j.dump(2) + "\n";
}

std::string render_per_language_tsv(const PerLanguageReport& report) {
    std::string out =
        "LANGUAGE\tTP\tFP\tFN\tTN\tPRECISION\tRECALL\tF1\tACCURACY\tBORROWING_RATE\n";
    auto row = [&](const std::string& name, const MetricsReport& m, const std::string& rate) {
        out += name + "\t" + std::to_string(m.tp) + "\t" + std::to_string(m.fp) + "\t" +
               std::to_string(m.fn) + "\t" + std::to_string(m.tn) + "\t" + fmt_opt(m.precision) +
               "\t" + fmt_opt(m.recall) + "\t" + fmt(m.f1) + "\t" + fmt(m.accuracy) + "\t" + rate +
               "\n";
    };
    for (const LanguageReport& lr : report.languages) {
        row(lr.language, lr.metrics, fmt(lr.borrowing_rate));
    }
    row("<micro-average>", report.micro, "");
    out += "<macro-average>\t\t\t\t\t" + fmt(report.macro.precision) + "\t" +
           fmt(report.macro.recall) + "\t" + fmt(report.macro.f1) + "\t" +
           fmt(report.macro.accuracy) + "\t\n";
    auto corr = [&](const char* name, const std::optional<double>& r) {
        out += std::string("<pearson-vs-rate:") + name + ">\t\t\t\t\t\t\t\t\t" +
               (r ? fmt(*r) : "undefined") + "\n";
    };
    corr("precision", report.precision_rate_r);
    corr("recall", report.recall_rate_r);
    corr("f1", report.f1_rate_r);
    corr("accuracy", report.accuracy_rate_r);
    return out;
}

std::string render_error_report_tsv(const std::vector<ErrorCandidate>& candidates) {
    std::string out =
        "TYPE\tFORM_ID\tLANGUAGE\tCONCEPT\tFORM\tTOKENS\tSCORE\tNED_MIN\tSCA_MIN\t"
        "NEAREST_DONOR_ID\tNEAREST_DONOR_FORM\tNEAREST_DONOR_TOKENS\n";
    for (const ErrorCandidate& c : candidates) {
        std::string tokens;
        for (std::size_t i = 0; i < c.form->segments.size(); ++i) {
            if (i > 0) tokens += ' ';
            tokens += c.form->segments[i];
        }
        std::string donor_id, donor_form, donor_tokens;
        if (c.nearest_donor) {
            donor_id = c.nearest_donor->id;
            donor_form = c.nearest_donor->form;
            for (std::size_t i = 0; i < c.nearest_donor->segments.size(); ++i) {
                if (i > 0) donor_tokens += ' ';
                donor_tokens += c.nearest_donor->segments[i];
            }
        }
        out += std::string(c.false_negative ? "FN" : "FP") + "\t" + c.form->id + "\t" +
               c.form->language + "\t" + c.form->concept_id + "\t" + c.form->form + "\t" + tokens +
               "\t" + fmt(c.score) + "\t" + fmt_opt(c.ned_min) + "\t" + fmt_opt(c.sca_min) + "\t" +
               donor_id + "\t" + donor_form + "\t" + donor_tokens + "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write file: " + path);
    }
    out << content;
}

}  // namespace loandet
