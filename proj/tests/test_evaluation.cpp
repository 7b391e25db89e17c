#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "loandet/errors.hpp"
#include "loandet/evaluation.hpp"
#include "test_util.hpp"

using namespace loandet;
using testutil::form;
using testutil::toy_model;

namespace {

// Wordlist with enough concepts for folding: donor covers every concept,
// one recipient language with a mix of borrowed and native forms.
Wordlist fold_fixture(int n_concepts) {
    std::mt19937 rng(55);
    std::vector<WordForm> forms;
    for (int c = 0; c < n_concepts; ++c) {
        std::string concept_id = "c" + std::to_string(c);
        WordForm donor = form("d" + std::to_string(c), "don", concept_id, "x");
        donor.segments = testutil::random_segments(rng, 5);
        forms.push_back(donor);
        WordForm recipient = form("r" + std::to_string(c), "rec", concept_id, "x");
        if (c % 3 == 0) {
            recipient.segments = forms.back().segments;  // copied = borrowed
            if (recipient.segments.size() > 1 && rng() % 2) recipient.segments.pop_back();
            recipient.borrowed_from_donor = true;
        } else {
            recipient.segments = testutil::random_segments(rng, 5);
        }
        forms.push_back(recipient);
    }
    return Wordlist(std::move(forms), "don");
}

Prediction make_pred(const std::string& id, bool predicted) {
    return {id, predicted, predicted ? 0.1 : 0.9};
}

DistanceRecord gold_rec(const std::string& id, bool gold) {
    DistanceRecord rec;
    rec.form_id = id;
    rec.language = "rec";
    rec.concept_id = "c";
    rec.ned_min = 0.5;
    rec.sca_min = 0.5;
    rec.gold = gold;
    return rec;
}

}  // namespace

TEST_CASE("plan_folds deals shuffled concepts round-robin") {
    Wordlist wl = fold_fixture(1308);
    FoldPlan plan = plan_folds(wl, 10, 42);
    REQUIRE(plan.folds.size() == 10);

    std::multiset<std::size_t> sizes;
    std::set<std::string> seen;
    for (const auto& fold : plan.folds) {
        sizes.insert(fold.size());
        for (const std::string& c : fold) CHECK(seen.insert(c).second);
    }
    CHECK(seen.size() == 1308);
    // 1308 = 8*131 + 2*130
    CHECK(sizes.count(131) == 8);
    CHECK(sizes.count(130) == 2);

    SUBCASE("determinism") {
        FoldPlan again = plan_folds(wl, 10, 42);
        CHECK(again.folds == plan.folds);
        FoldPlan different = plan_folds(wl, 10, 43);
        CHECK(different.folds != plan.folds);
    }
    SUBCASE("serialization round trip") {
        testutil::TempFile file("", ".json");
        save_fold_plan(plan, file.path());
        FoldPlan back = load_fold_plan(file.path());
        CHECK(back.k == plan.k);
        CHECK(back.seed == plan.seed);
        CHECK(back.folds == plan.folds);
        validate_fold_plan(back, wl);
    }
}

TEST_CASE("plan_folds edge cases") {
    Wordlist two = fold_fixture(2);
    FoldPlan plan = plan_folds(two, 2, 1);
    CHECK(plan.folds[0].size() == 1);
    CHECK(plan.folds[1].size() == 1);

    CHECK_THROWS_AS(plan_folds(two, 3, 1), ConfigError);  // k > concepts
    CHECK_THROWS_AS(plan_folds(two, 1, 1), ConfigError);  // k < 2
}

TEST_CASE("validate_fold_plan rejects corrupted plans") {
    Wordlist wl = fold_fixture(6);
    FoldPlan plan = plan_folds(wl, 3, 9);

    FoldPlan missing = plan;
    missing.folds[0].pop_back();
    CHECK_THROWS_AS(validate_fold_plan(missing, wl), ConfigError);

    FoldPlan duplicated = plan;
    duplicated.folds[0].push_back(duplicated.folds[1][0]);
    CHECK_THROWS_AS(validate_fold_plan(duplicated, wl), ConfigError);

    FoldPlan unknown = plan;
    unknown.folds[0][0] = "never-heard-of-it";
    CHECK_THROWS_AS(validate_fold_plan(unknown, wl), ConfigError);
}

TEST_CASE("score computes the confusion counts and metrics") {
    std::vector<DistanceRecord> gold;
    std::vector<Prediction> preds;
    // tp=5, fp=1, fn=2, tn=12
    int id = 0;
    for (int i = 0; i < 5; ++i) {
        gold.push_back(gold_rec("f" + std::to_string(id), true));
        preds.push_back(make_pred("f" + std::to_string(id++), true));
    }
    gold.push_back(gold_rec("f" + std::to_string(id), false));
    preds.push_back(make_pred("f" + std::to_string(id++), true));
    for (int i = 0; i < 2; ++i) {
        gold.push_back(gold_rec("f" + std::to_string(id), true));
        preds.push_back(make_pred("f" + std::to_string(id++), false));
    }
    for (int i = 0; i < 12; ++i) {
        gold.push_back(gold_rec("f" + std::to_string(id), false));
        preds.push_back(make_pred("f" + std::to_string(id++), false));
    }

    MetricsReport m = score(preds, gold);
    CHECK(m.tp == 5);
    CHECK(m.fp == 1);
    CHECK(m.fn == 2);
    CHECK(m.tn == 12);
    CHECK(*m.precision == doctest::Approx(5.0 / 6.0));
    CHECK(*m.recall == doctest::Approx(5.0 / 7.0));
    CHECK(m.f1 == doctest::Approx(2 * (5.0 / 6.0) * (5.0 / 7.0) / (5.0 / 6.0 + 5.0 / 7.0)));
    CHECK(m.accuracy == doctest::Approx(0.85));
}

TEST_CASE("score degenerate cases") {
    SUBCASE("no positives anywhere") {
        std::vector<DistanceRecord> gold = {gold_rec("a", false), gold_rec("b", false)};
        std::vector<Prediction> preds = {make_pred("a", false), make_pred("b", false)};
        MetricsReport m = score(preds, gold);
        CHECK_FALSE(m.precision.has_value());
        CHECK_FALSE(m.recall.has_value());
        CHECK(m.f1 == 0.0);
        CHECK(m.accuracy == 1.0);
    }
    SUBCASE("key mismatch") {
        std::vector<DistanceRecord> gold = {gold_rec("a", false)};
        std::vector<Prediction> preds = {make_pred("zzz", false)};
        CHECK_THROWS_AS(score(preds, gold), ShapeError);
        preds = {make_pred("a", false), make_pred("a", false)};
        CHECK_THROWS_AS(score(preds, gold), ShapeError);
    }
}

TEST_CASE("all-negative accuracy equals one minus the positive rate") {
    std::mt19937 rng(66);
    for (int iter = 0; iter < 30; ++iter) {
        std::vector<DistanceRecord> gold;
        std::vector<Prediction> preds;
        int n = 5 + rng() % 50, positives = 0;
        for (int i = 0; i < n; ++i) {
            bool g = rng() % 3 == 0;
            positives += g;
            gold.push_back(gold_rec("f" + std::to_string(i), g));
            preds.push_back(make_pred("f" + std::to_string(i), false));
        }
        MetricsReport m = score(preds, gold);
        CHECK(m.accuracy == doctest::Approx(1.0 - double(positives) / n));
    }
}

TEST_CASE("cross_validate on a toy wordlist") {
    Wordlist wl = fold_fixture(12);
    FoldPlan plan = plan_folds(wl, 2, 3);
    std::vector<ExperimentConfig> experiments = {
        {"closest-sca", Method::closest, Measure::sca, LossKind::hinge, ClassWeighting::uniform,
         false, std::nullopt}};
    CrossValResult result = cross_validate(wl, plan, experiments, toy_model());

    REQUIRE(result.experiments.size() == 1);
    const ExperimentResult& exp = result.experiments[0];
    REQUIRE_FALSE(exp.failed);
    REQUIRE(exp.fold_metrics.size() == 2);

    SUBCASE("single experiment summary is the fold mean") {
        double mean_f1 = (exp.fold_metrics[0].f1 + exp.fold_metrics[1].f1) / 2;
        CHECK(exp.summary.f1 == doctest::Approx(mean_f1));
    }
    SUBCASE("every recipient form is scored exactly once across folds") {
        long total = 0;
        for (const MetricsReport& m : exp.fold_metrics) total += m.total();
        CHECK(total == long(wl.form_count("rec")));
    }
    SUBCASE("bit-identical rerun") {
        CrossValResult again = cross_validate(wl, plan, experiments, toy_model());
        CHECK(render_summary_tsv(again) == render_summary_tsv(result));
        CHECK(render_per_fold_tsv(again) == render_per_fold_tsv(result));
    }
    SUBCASE("classifier config with a measure is rejected") {
        std::vector<ExperimentConfig> bad = {{"classifier", Method::classifier, Measure::ned,
                                              LossKind::hinge, ClassWeighting::uniform, false,
                                              std::nullopt}};
        CHECK_THROWS_AS(cross_validate(wl, plan, bad, toy_model()), ConfigError);
    }
}

TEST_CASE("cross_validate marks failing experiments and continues") {
    // All recipient forms borrowed: threshold calibration cannot see two
    // classes, so the closest-match experiment fails; the classifier fails
    // too, and the run itself still completes.
    std::vector<WordForm> forms;
    for (int c = 0; c < 4; ++c) {
        std::string concept_id = "c" + std::to_string(c);
        forms.push_back(form("d" + std::to_string(c), "don", concept_id, "p a t"));
        forms.push_back(form("r" + std::to_string(c), "rec", concept_id, "p a t", true));
    }
    Wordlist wl(std::move(forms), "don");
    FoldPlan plan = plan_folds(wl, 2, 1);
    std::vector<ExperimentConfig> experiments = main_experiments();
    CrossValResult result = cross_validate(wl, plan, experiments, toy_model());
    REQUIRE(result.experiments.size() == 5);
    for (const ExperimentResult& exp : result.experiments) {
        CHECK(exp.failed);
        CHECK_FALSE(exp.failure.empty());
    }
}

TEST_CASE("blocked_anova on hand-computed matrices") {
    SUBCASE("3x4 integer matrix") {
        // Worked by hand with exact rationals:
        //   SS_treatment = 104/3, SS_block = 41/3, SS_total = 149/3,
        //   SS_error = 4/3, F(2,6) = (52/3)/(2/9) = 78,
        //   p = I_{6/162}(3,1) = (1/27)^3 = 1/19683.
        std::vector<std::vector<double>> y = {
            {10, 12, 11, 13}, {14, 15, 13, 16}, {9, 11, 10, 12}};
        AnovaResult r = blocked_anova(y);
        CHECK(r.df_treatment == 2);
        CHECK(r.df_error == 6);
        CHECK(r.f_statistic == doctest::Approx(78.0).epsilon(1e-9));
        CHECK(r.p_value == doctest::Approx(std::pow(1.0 / 27.0, 3)).epsilon(1e-9));
    }
    SUBCASE("2x3 fractional matrix") {
        // SS_treatment = 0.135, SS_block = 0.01, SS_error = 0.03,
        // F(1,2) = 0.135 / 0.015 = 9, p = 1 - 3/sqrt(11).
        std::vector<std::vector<double>> y = {{0.5, 0.7, 0.6}, {0.9, 0.8, 1.0}};
        AnovaResult r = blocked_anova(y);
        CHECK(r.df_treatment == 1);
        CHECK(r.df_error == 2);
        CHECK(r.f_statistic == doctest::Approx(9.0).epsilon(1e-9));
        CHECK(r.p_value == doctest::Approx(1.0 - 3.0 / std::sqrt(11.0)).epsilon(1e-9));
    }
    SUBCASE("pure block effect: F=0, p=1") {
        std::vector<std::vector<double>> y = {{1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2, 3, 4}};
        AnovaResult r = blocked_anova(y);
        CHECK(r.f_statistic == 0.0);
        CHECK(r.p_value == 1.0);
    }
    SUBCASE("zero error variance with treatment effect is degenerate") {
        // Perfectly additive: y = treatment + block, residuals all zero.
        std::vector<std::vector<double>> y = {{1, 2, 3}, {2, 3, 4}};
        CHECK_THROWS_AS(blocked_anova(y), DomainError);
    }
    SUBCASE("shape checks") {
        CHECK_THROWS_AS(blocked_anova({{1, 2}}), DomainError);
        CHECK_THROWS_AS(blocked_anova({{1}, {2}}), DomainError);
        CHECK_THROWS_AS(blocked_anova({{1, 2}, {1, 2, 3}}), ShapeError);
    }
}

TEST_CASE("blocked_anova is invariant under a constant block shift") {
    std::mt19937 rng(77);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<std::vector<double>> y(3, std::vector<double>(5));
        for (auto& row : y) {
            for (double& v : row) v = (rng() % 1000) / 1000.0;
        }
        AnovaResult base = blocked_anova(y);
        std::vector<std::vector<double>> shifted = y;
        std::size_t fold = rng() % 5;
        for (auto& row : shifted) row[fold] += 0.37;
        AnovaResult after = blocked_anova(shifted);
        CHECK(after.f_statistic == doctest::Approx(base.f_statistic).epsilon(1e-9));
    }
}

TEST_CASE("p-value decreases as F grows") {
    auto p_of = [](double f) {
        return incomplete_beta(36.0 / 2.0, 4.0 / 2.0, 36.0 / (36.0 + 4.0 * f));
    };
    CHECK(p_of(2.0) > p_of(5.0));
    CHECK(p_of(5.0) > p_of(14.3));
    CHECK(p_of(14.3) < 0.0001);  // the headline regime for F(4,36)
}

TEST_CASE("pearson correlation") {
    CHECK(*pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
    CHECK(*pearson({1, 2, 3}, {6, 4, 2}) == doctest::Approx(-1.0));
    CHECK_FALSE(pearson({1, 1, 1}, {2, 4, 6}).has_value());  // zero variance
    CHECK_FALSE(pearson({1}, {2}).has_value());
    CHECK_THROWS_AS(pearson({1, 2}, {1}), ShapeError);
}

TEST_CASE("per_language_report") {
    std::vector<WordForm> forms = {
        form("d1", "don", "c1", "k a s a"),
        form("a1", "la", "c1", "k a s a", true),   // tp
        form("a2", "la", "c1", "t u p i", false),  // tn
        form("b1", "lb", "c1", "k a s i", true),   // fn
        form("b2", "lb", "c1", "m o l e", false),  // fp
    };
    Wordlist wl(std::move(forms), "don");
    std::vector<DistanceRecord> records = build_distance_records(wl, wl.concepts(), toy_model());
    std::vector<Prediction> preds = {make_pred("a1", true), make_pred("a2", false),
                                     make_pred("b1", false), make_pred("b2", true)};
    PerLanguageReport report = per_language_report(wl, records, preds);

    REQUIRE(report.languages.size() == 2);
    CHECK(report.languages[0].language == "la");
    CHECK(report.languages[0].metrics.tp == 1);
    CHECK(report.languages[0].metrics.tn == 1);
    CHECK(report.languages[0].borrowing_rate == doctest::Approx(0.5));
    CHECK(report.languages[1].metrics.fn == 1);
    CHECK(report.languages[1].metrics.fp == 1);

    CHECK(report.micro.tp == 1);
    CHECK(report.micro.fp == 1);
    CHECK(report.micro.fn == 1);
    CHECK(report.micro.tn == 1);
    CHECK(report.micro.accuracy == doctest::Approx(0.5));

    // Two languages with identical rates: correlations are undefined.
    CHECK_FALSE(report.f1_rate_r.has_value());
}

TEST_CASE("per_language_report on a one-language wordlist") {
    std::vector<WordForm> forms = {form("d1", "don", "c1", "k a s a"),
                                   form("a1", "la", "c1", "k a s a", true)};
    Wordlist wl(std::move(forms), "don");
    std::vector<DistanceRecord> records = build_distance_records(wl, wl.concepts(), toy_model());
    PerLanguageReport report = per_language_report(wl, records, {make_pred("a1", true)});
    REQUIRE(report.languages.size() == 1);
    CHECK_FALSE(report.recall_rate_r.has_value());
    CHECK_FALSE(report.precision_rate_r.has_value());
}

TEST_CASE("error_report lists FPs and FNs, FN first, far distances first") {
    std::vector<WordForm> forms = {
        form("sp-year", "don", "year", "a ɲ o"),
        form("sp-age", "don", "age", "e d a d"),
        form("wi-age", "rec", "age", "a n i o", true),   // borrowed via semantic shift -> FN
        form("tz-animal", "rec", "beast", "tʃ a n u l", false),
        form("sp-animal", "don", "beast", "a n i m a l"),
        form("ok-1", "rec", "year", "a ɲ o", true),      // detected, not reported
    };
    Wordlist wl(std::move(forms), "don");
    std::vector<DistanceRecord> records = build_distance_records(wl, wl.concepts(), toy_model());
    std::vector<Prediction> preds = {make_pred("wi-age", false), make_pred("tz-animal", true),
                                     make_pred("ok-1", true)};
    std::vector<ErrorCandidate> errors = error_report(wl, records, preds, toy_model());

    REQUIRE(errors.size() == 2);
    CHECK(errors[0].false_negative);
    CHECK(errors[0].form->id == "wi-age");
    CHECK(errors[0].nearest_donor != nullptr);
    CHECK(errors[0].nearest_donor->id == "sp-age");  // same-concept lookup misses año
    CHECK_FALSE(errors[1].false_negative);
    CHECK(errors[1].form->id == "tz-animal");

    std::string rendered = render_error_report_tsv(errors);
    CHECK(rendered.find("FN\twi-age") != std::string::npos);
    CHECK(rendered.find("FP\ttz-animal") != std::string::npos);

    SUBCASE("perfect predictions produce an empty report") {
        std::vector<Prediction> perfect = {make_pred("wi-age", true), make_pred("tz-animal", false),
                                           make_pred("ok-1", true)};
        CHECK(error_report(wl, records, perfect, toy_model()).empty());
    }
}

TEST_CASE("pooled fold confusions equal the concatenated prediction counts") {
    Wordlist wl = fold_fixture(20);
    FoldPlan plan = plan_folds(wl, 4, 5);
    std::vector<ExperimentConfig> experiments = {
        {"closest-ned", Method::closest, Measure::ned, LossKind::hinge, ClassWeighting::uniform,
         false, std::nullopt}};
    CrossValResult result = cross_validate(wl, plan, experiments, toy_model());
    const ExperimentResult& exp = result.experiments[0];

    // Recompute each fold by hand and pool.
    std::vector<DistanceRecord> all = build_distance_records(wl, wl.concepts(), toy_model());
    long tp = 0, fp = 0, fn = 0, tn = 0;
    for (const MetricsReport& m : exp.fold_metrics) {
        tp += m.tp;
        fp += m.fp;
        fn += m.fn;
        tn += m.tn;
    }
    CHECK(tp + fp + fn + tn == long(all.size()));
}
