#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loandet/classifier.hpp"
#include "loandet/detectors.hpp"
#include "loandet/wordlist.hpp"

namespace loandet {

// Deterministic partition of the concept set into k blocks of near-equal
// size. All words of a concept land in the fold of their concept.
struct FoldPlan {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::string>> folds;
};

FoldPlan plan_folds(const Wordlist& wl, int k, std::uint64_t seed);
void save_fold_plan(const FoldPlan& plan, const std::string& path);
FoldPlan load_fold_plan(const std::string& path);

// Folds must be disjoint and cover the wordlist's concepts exactly.
void validate_fold_plan(const FoldPlan& plan, const Wordlist& wl);

struct MetricsReport {
    long tp = 0, fp = 0, fn = 0, tn = 0;
    std::optional<double> precision;  // absent when tp+fp == 0
    std::optional<double> recall;     // absent when tp+fn == 0
    double f1 = 0.0;                  // 0 when either side is absent
    double accuracy = 0.0;
    std::string experiment;
    std::string scope;

    long total() const { return tp + fp + fn + tn; }
};

MetricsReport score(const std::vector<Prediction>& predictions,
                    const std::vector<DistanceRecord>& gold);

enum class Method { closest, cognate, classifier };

const char* method_name(Method m);

struct ExperimentConfig {
    std::string label;
    Method method = Method::closest;
    std::optional<Measure> measure;      // required for closest/cognate; both for classifier
    LossKind loss = LossKind::hinge;
    ClassWeighting class_weighting = ClassWeighting::uniform;
    bool per_language_thresholds = false;     // closest only
    std::optional<double> fixed_threshold;    // skips calibration when set
};

// The five main experiments in label order.
std::vector<ExperimentConfig> main_experiments();
// Ad-hoc variants: logistic regression, balanced hinge, per-language closest.
std::vector<ExperimentConfig> adhoc_experiments();

struct SummaryRow {
    std::string label;
    double precision = 0.0, recall = 0.0, f1 = 0.0, accuracy = 0.0;  // fold means
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<MetricsReport> fold_metrics;
    SummaryRow summary;
    double wall_ms = 0.0;  // informational only, never asserted
    bool failed = false;
    std::string failure;
};

struct CrossValResult {
    FoldPlan plan;
    std::vector<ExperimentResult> experiments;
};

// Per experiment and fold: calibrate/train on the other k-1 folds' concepts,
// predict the held-out fold, score. A failing experiment is marked failed and
// the remaining experiments proceed.
CrossValResult cross_validate(const Wordlist& wl, const FoldPlan& plan,
                              const std::vector<ExperimentConfig>& experiments,
                              const SoundClassModel& model, const AlignmentScoreScheme& scheme = {},
                              const TrainOptions& options = {});

struct AnovaResult {
    double f_statistic = 0.0;
    int df_treatment = 0;
    int df_error = 0;
    double p_value = 1.0;
};

// Randomized-blocks two-way ANOVA without interaction over a complete
// experiments x folds matrix of one metric.
AnovaResult blocked_anova(const std::vector<std::vector<double>>& scores);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys);

struct LanguageReport {
    std::string language;
    MetricsReport metrics;
    double borrowing_rate = 0.0;
};

struct PerLanguageReport {
    std::vector<LanguageReport> languages;
    MetricsReport micro;  // pooled confusion counts over all languages
    SummaryRow macro;     // mean of per-language metrics
    std::optional<double> precision_rate_r, recall_rate_r, f1_rate_r, accuracy_rate_r;
};

PerLanguageReport per_language_report(const Wordlist& wl,
                                      const std::vector<DistanceRecord>& records,
                                      const std::vector<Prediction>& predictions);

struct ErrorCandidate {
    bool false_negative = false;  // false positive otherwise
    const WordForm* form = nullptr;
    double score = 0.0;
    std::optional<double> ned_min, sca_min;
    const WordForm* nearest_donor = nullptr;  // by SCA, NED fallback; null on donor gap
};

// FP/FN candidates for manual review, false negatives first, then by
// distance descending (donor gaps sort to the top).
std::vector<ErrorCandidate> error_report(const Wordlist& wl,
                                         const std::vector<DistanceRecord>& records,
                                         const std::vector<Prediction>& predictions,
                                         const SoundClassModel& model,
                                         const AlignmentScoreScheme& scheme = {});

// Writers used by the CLI; all output is deterministic for fixed inputs.
std::string render_summary_tsv(const CrossValResult& result);
std::string render_per_fold_tsv(const CrossValResult& result);
std::string render_anova_json(const CrossValResult& result);
std::string render_per_language_tsv(const PerLanguageReport& report);
std::string render_error_report_tsv(const std::vector<ErrorCandidate>& candidates);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace loandet
