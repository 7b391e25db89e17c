#include "loandet/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "loandet/errors.hpp"
#include "loandet/tsv.hpp"

namespace loandet {

const char* loss_name(LossKind k) {
    return k == LossKind::hinge ? "hinge" : "logistic";
}

const char* class_weighting_name(ClassWeighting w) {
    return w == ClassWeighting::uniform ? "uniform" : "balanced";
}

LossKind loss_from_name(const std::string& name) {
    if (name == "hinge") return LossKind::hinge;
    if (name == "logistic") return LossKind::logistic;
    throw ConfigError("unknown loss kind: " + name);
}

ClassWeighting class_weighting_from_name(const std::string& name) {
    if (name == "uniform") return ClassWeighting::uniform;
    if (name == "balanced") return ClassWeighting::balanced;
    throw ConfigError("unknown class weighting: " + name);
}

FeatureSet featurize(const std::vector<DistanceRecord>& records,
                     const std::vector<std::string>& language_index,
                     std::vector<std::string>* warnings) {
    if (language_index.empty()) {
        throw ConfigError("featurize: empty language index");
    }
    std::unordered_map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < language_index.size(); ++i) slot[language_index[i]] = i;

    FeatureSet out;
    out.language_index = language_index;
    out.rows.reserve(records.size());
    std::unordered_map<std::string, bool> warned;
    for (const DistanceRecord& rec : records) {
        FeatureVector row;
        row.form_id = rec.form_id;
        row.label = rec.gold;
        row.values.assign(out.dim(), 0.0);
        if (rec.ned_min && rec.sca_min) {
            row.present = true;
            row.values[0] = *rec.ned_min;
            row.values[1] = *rec.sca_min;
        }
        auto it = slot.find(rec.language);
        if (it != slot.end()) {
            row.values[2 + it->second] = 1.0;
        } else if (!warned[rec.language]) {
            warned[rec.language] = true;
            emit_warning(warnings, "language " + rec.language +
                                       " unseen in the language index; using a zero one-hot");
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

double LinearModel::decision_value(const std::vector<double>& x) const {
    if (x.size() != weights.size()) {
        throw ShapeError("feature length " + std::to_string(x.size()) + " does not match model (" +
                         std::to_string(weights.size()) + ")");
    }
    double v = bias;
    for (std::size_t i = 0; i < x.size(); ++i) v += weights[i] * x[i];
    return v;
}

Objective objective_and_gradient(const FeatureSet& features, const std::vector<double>& weights,
                                 double bias, LossKind loss, ClassWeighting weighting, double l2) {
    const std::size_t dim = features.dim();
    if (weights.size() != dim) {
        throw ShapeError("weight length does not match feature dimension");
    }

    std::size_t n_present = 0, n_pos = 0;
    for (const FeatureVector& row : features.rows) {
        if (!row.present) continue;
        ++n_present;
        if (row.label) ++n_pos;
    }
    std::size_t n_neg = n_present - n_pos;

    double w_pos = 1.0, w_neg = 1.0;
    if (weighting == ClassWeighting::balanced && n_pos > 0 && n_neg > 0) {
        w_pos = static_cast<double>(n_present) / (2.0 * n_pos);
        w_neg = static_cast<double>(n_present) / (2.0 * n_neg);
    }

    Objective obj;
    obj.grad_weights.assign(dim, 0.0);
    // L2 term on the weights only; the bias is unregularized.
    for (std::size_t i = 0; i < dim; ++i) {
        obj.value += 0.5 * l2 * weights[i] * weights[i];
        obj.grad_weights[i] = l2 * weights[i];
    }
    if (n_present == 0) return obj;

    const double inv_n = 1.0 / static_cast<double>(n_present);
    for (const FeatureVector& row : features.rows) {
        if (!row.present) continue;
        double y = row.label ? 1.0 : -1.0;
        double c = (row.label ? w_pos : w_neg) * inv_n;
        double v = bias;
        for (std::size_t i = 0; i < dim; ++i) v += weights[i] * row.values[i];
        double margin = y * v;
        double dloss;  // derivative of the per-example loss w.r.t. v
        if (loss == LossKind::hinge) {
            if (margin >= 1.0) continue;
            obj.value += c * (1.0 - margin);
            dloss = -y;
        } else {
            // log(1 + exp(-margin)), computed stably
            double l = margin > 0 ? std::log1p(std::exp(-margin))
                                  : -margin + std::log1p(std::exp(margin));
            obj.value += c * l;
            double sigma = 1.0 / (1.0 + std::exp(margin));
            dloss = -y * sigma;
        }
        for (std::size_t i = 0; i < dim; ++i) obj.grad_weights[i] += c * dloss * row.values[i];
        obj.grad_bias += c * dloss;
    }
    return obj;
}

LinearModel train(const FeatureSet& features, LossKind loss, ClassWeighting weighting,
                  const TrainOptions& options) {
    std::size_t n_pos = 0, n_neg = 0;
    for (const FeatureVector& row : features.rows) {
        if (!row.present) continue;
        (row.label ? n_pos : n_neg)++;
    }
    if (n_pos == 0 || n_neg == 0) {
        throw CalibrationError("training needs both classes among records with present distances");
    }

    LinearModel model;
    model.weights.assign(features.dim(), 0.0);
    model.bias = 0.0;
    model.loss = loss;
    model.class_weighting = weighting;
    model.language_index = features.language_index;
    model.options = options;

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        Objective obj = objective_and_gradient(features, model.weights, model.bias, loss, weighting,
                                               options.l2);
        if (!std::isfinite(obj.value)) {
            throw CalibrationError("training diverged at epoch " + std::to_string(epoch));
        }
        for (std::size_t i = 0; i < model.weights.size(); ++i) {
            model.weights[i] -= options.learning_rate * obj.grad_weights[i];
        }
        model.bias -= options.learning_rate * obj.grad_bias;
    }
    return model;
}

std::vector<Prediction> predict(const LinearModel& model, const FeatureSet& features) {
    std::vector<Prediction> predictions;
    predictions.reserve(features.rows.size());
    for (const FeatureVector& row : features.rows) {
        Prediction p;
        p.form_id = row.form_id;
        if (!row.present) {
            // Donor-gap rule: never consult the model.
            p.predicted = false;
            p.score = 0.0;
        } else {
            double v = model.decision_value(row.values);
            p.predicted = v > 0.0;
            p.score = v;
        }
        predictions.push_back(std::move(p));
    }
    return predictions;
}

void save_model(const LinearModel& model, const std::string& path) {
    nlohmann::json j;
    j["schema"] = LinearModel::kSchema;
    j["weights"] = model.weights;
    j["bias"] = model.bias;
    j["loss_kind"] = loss_name(model.loss);
    j["class_weights"] = class_weighting_name(model.class_weighting);
    j["language_index"] = model.language_index;
    j["hyperparameters"] = {{"learning_rate", model.options.learning_rate},
                            {"epochs", model.options.epochs},
                            {"l2", model.options.l2},
                            {"seed", model.options.seed}};
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write file: " + path);
    }
    out << j.dump(2) << "\n";
}

LinearModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed model file " + path + ": " + e.what());
    }
    if (!j.contains("schema") || j["schema"] != LinearModel::kSchema) {
        throw DataError("model file " + path + " has an unsupported schema tag");
    }
    LinearModel model;
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<double>();
    model.loss = loss_from_name(j.at("loss_kind").get<std::string>());
    model.class_weighting = class_weighting_from_name(j.at("class_weights").get<std::string>());
    model.language_index = j.at("language_index").get<std::vector<std::string>>();
    const auto& hp = j.at("hyperparameters");
    model.options.learning_rate = hp.at("learning_rate").get<double>();
    model.options.epochs = hp.at("epochs").get<int>();
    model.options.l2 = hp.at("l2").get<double>();
    model.options.seed = hp.at("seed").get<std::uint64_t>();
    if (model.weights.size() != 2 + model.language_index.size()) {
        throw DataError("model file " + path + ": weight length does not match language index");
    }
    return model;
}

}  // namespace loandet
