#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loandet/detectors.hpp"

namespace loandet {

enum class LossKind { hinge, logistic };
enum class ClassWeighting { uniform, balanced };

const char* loss_name(LossKind k);
const char* class_weighting_name(ClassWeighting w);
LossKind loss_from_name(const std::string& name);
ClassWeighting class_weighting_from_name(const std::string& name);

struct TrainOptions {
    double learning_rate = 0.1;
    // Full-batch descent at this rate needs a few thousand epochs before the
    // decision boundary stops moving on ~10k-row wordlists; 500 leaves the
    // model visibly short of the optimum.
    int epochs = 5000;
    double l2 = 1e-3;
    std::uint64_t seed = 42;
};

// [ned, sca, one-hot language slots]. Rows with absent distances carry
// present=false: they are excluded from training and predicted not-borrowed
// without consulting the model.
struct FeatureVector {
    std::string form_id;
    std::vector<double> values;
    bool present = false;
    bool label = false;
};

struct FeatureSet {
    std::vector<std::string> language_index;
    std::vector<FeatureVector> rows;

    std::size_t dim() const { return 2 + language_index.size(); }
};

FeatureSet featurize(const std::vector<DistanceRecord>& records,
                     const std::vector<std::string>& language_index,
                     std::vector<std::string>* warnings = nullptr);

struct LinearModel {
    static constexpr const char* kSchema = "loandet-linear-model/1";

    std::vector<double> weights;
    double bias = 0.0;
    LossKind loss = LossKind::hinge;
    ClassWeighting class_weighting = ClassWeighting::uniform;
    std::vector<std::string> language_index;
    TrainOptions options;

    double decision_value(const std::vector<double>& x) const;
};

// Regularized objective and its gradient at (weights, bias), over the
// present rows of the feature set. Exposed for the finite-difference checks.
struct Objective {
    double value = 0.0;
    std::vector<double> grad_weights;
    double grad_bias = 0.0;
};
Objective objective_and_gradient(const FeatureSet& features, const std::vector<double>& weights,
                                 double bias, LossKind loss, ClassWeighting weighting, double l2);

// Deterministic full-batch gradient descent from zero weights. Throws
// CalibrationError on one-class data or if the loss turns non-finite.
LinearModel train(const FeatureSet& features, LossKind loss, ClassWeighting weighting,
                  const TrainOptions& options = {});

// Decision value v = w.x + b; predicted iff v > 0 (ties negative). Rows with
// present=false are predicted false with score 0.
std::vector<Prediction> predict(const LinearModel& model, const FeatureSet& features);

void save_model(const LinearModel& model, const std::string& path);
LinearModel load_model(const std::string& path);

}  // namespace loandet
