#include "loandet/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "loandet/errors.hpp"
#include "loandet/tsv.hpp"

namespace loandet {

const char* measure_name(Measure m) {
    return m == Measure::ned ? "ned" : "sca";
}

std::vector<DistanceRecord> build_distance_records(const Wordlist& wl,
                                                   const std::vector<std::string>& concepts,
                                                   const SoundClassModel& model,
                                                   const AlignmentScoreScheme& scheme) {
    std::set<std::string> wanted(concepts.begin(), concepts.end());
    for (const std::string& c : concepts) {
        if (!wl.has_concept(c)) {
            throw LookupError("unknown concept: " + c);
        }
    }
    std::vector<DistanceRecord> records;
    for (const WordForm& f : wl.forms()) {
        if (f.language == wl.donor_language() || !wanted.count(f.concept_id)) continue;
        DistanceRecord rec;
        rec.form_id = f.id;
        rec.language = f.language;
        rec.concept_id = f.concept_id;
        rec.gold = f.borrowed_from_donor;
        ConceptView view = wl.concept_view(f.concept_id);
        if (!view.donor_forms.empty()) {
            double best_ned = std::numeric_limits<double>::infinity();
            double best_sca = std::numeric_limits<double>::infinity();
            for (const WordForm* donor : view.donor_forms) {
                best_ned = std::min(best_ned, ned(f.segments, donor->segments));
                best_sca = std::min(best_sca, sca_distance(f.segments, donor->segments, model, scheme));
            }
            rec.ned_min = best_ned;
            rec.sca_min = best_sca;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

namespace {

double f1_at_threshold(const std::vector<DistanceRecord>& records, Measure measure,
                       double threshold) {
    long tp = 0, fp = 0, fn = 0;
    for (const DistanceRecord& rec : records) {
        const std::optional<double>& d = rec.distance(measure);
        bool predicted = d.has_value() && *d < threshold;
        if (predicted && rec.gold) ++tp;
        if (predicted && !rec.gold) ++fp;
        if (!predicted && rec.gold) ++fn;
    }
    if (tp + fp == 0 || tp + fn == 0) return 0.0;
    double p = static_cast<double>(tp) / (tp + fp);
    double r = static_cast<double>(tp) / (tp + fn);
    return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

}  // namespace

double calibrate_threshold(const std::vector<DistanceRecord>& records, Measure measure) {
    bool has_pos = false, has_neg = false;
    for (const DistanceRecord& rec : records) {
        if (!rec.distance(measure).has_value()) continue;
        (rec.gold ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) {
        throw CalibrationError("threshold calibration needs both classes with present distances");
    }
    double best_theta = 0.0;
    double best_f1 = -1.0;
    for (int i = 0; i <= 100; ++i) {
        double theta = i / 100.0;
        double f1 = f1_at_threshold(records, measure, theta);
        if (f1 > best_f1) {
            best_f1 = f1;
            best_theta = theta;
        }
    }
    return best_theta;
}

std::vector<Prediction> detect_closest_match(const std::vector<DistanceRecord>& records,
                                             Measure measure, double threshold) {
    std::vector<Prediction> predictions;
    predictions.reserve(records.size());
    for (const DistanceRecord& rec : records) {
        const std::optional<double>& d = rec.distance(measure);
        Prediction p;
        p.form_id = rec.form_id;
        p.predicted = d.has_value() && *d < threshold;
        p.score = d.value_or(1.0);
        predictions.push_back(std::move(p));
    }
    return predictions;
}

std::vector<int> average_linkage_clusters(
    const std::vector<std::string>& ids,
    const std::function<double(std::size_t, std::size_t)>& dist, double threshold) {
    const std::size_t n = ids.size();
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});

    // Pairwise distances between original items, computed once.
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            d[i][j] = d[j][i] = dist(i, j);
        }
    }

    auto representative = [&](const std::vector<std::size_t>& members) {
        std::size_t best = members[0];
        for (std::size_t m : members) {
            if (ids[m] < ids[best]) best = m;
        }
        return best;
    };

    while (clusters.size() > 1) {
        double best_avg = std::numeric_limits<double>::infinity();
        std::pair<std::string, std::string> best_key;
        std::size_t best_a = 0, best_b = 0;
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                double sum = 0.0;
                for (std::size_t i : clusters[a]) {
                    for (std::size_t j : clusters[b]) sum += d[i][j];
                }
                double avg = sum / (clusters[a].size() * clusters[b].size());
                const std::string& ra = ids[representative(clusters[a])];
                const std::string& rb = ids[representative(clusters[b])];
                std::pair<std::string, std::string> key = std::minmax(ra, rb);
                if (avg < best_avg || (avg == best_avg && key < best_key)) {
                    best_avg = avg;
                    best_key = key;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        if (!(best_avg < threshold)) break;
        clusters[best_a].insert(clusters[best_a].end(), clusters[best_b].begin(),
                                clusters[best_b].end());
        clusters.erase(clusters.begin() + best_b);
    }

    std::vector<int> assignment(n, -1);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (std::size_t i : clusters[c]) assignment[i] = static_cast<int>(c);
    }
    return assignment;
}

std::vector<Prediction> detect_cognate_based(const Wordlist& wl,
                                             const std::vector<std::string>& concepts,
                                             Measure measure, double threshold,
                                             const SoundClassModel& model,
                                             const AlignmentScoreScheme& scheme) {
    std::vector<Prediction> predictions;
    for (const std::string& concept_id : concepts) {
        ConceptView view = wl.concept_view(concept_id);
        std::vector<const WordForm*> items(view.donor_forms);
        items.insert(items.end(), view.recipient_forms.begin(), view.recipient_forms.end());
        if (view.recipient_forms.empty()) continue;

        if (view.donor_forms.empty()) {
            for (const WordForm* f : view.recipient_forms) {
                predictions.push_back({f->id, false, 1.0});
            }
            continue;
        }

        std::vector<std::string> ids;
        ids.reserve(items.size());
        for (const WordForm* f : items) ids.push_back(f->id);
        std::vector<std::vector<double>> d(items.size(), std::vector<double>(items.size(), 0.0));
        for (std::size_t i = 0; i < items.size(); ++i) {
            for (std::size_t j = i + 1; j < items.size(); ++j) {
                double dist = measure == Measure::ned
                                  ? ned(items[i]->segments, items[j]->segments)
                                  : sca_distance(items[i]->segments, items[j]->segments, model, scheme);
                d[i][j] = d[j][i] = dist;
            }
        }
        std::vector<int> cluster = average_linkage_clusters(
            ids, [&](std::size_t i, std::size_t j) { return d[i][j]; }, threshold);

        std::size_t n_donor = view.donor_forms.size();
        for (std::size_t i = n_donor; i < items.size(); ++i) {
            double donor_sum = 0.0;
            std::size_t donor_count = 0;
            for (std::size_t j = 0; j < n_donor; ++j) {
                if (cluster[j] == cluster[i]) {
                    donor_sum += d[i][j];
                    ++donor_count;
                }
            }
            Prediction p;
            p.form_id = items[i]->id;
            p.predicted = donor_count > 0;
            p.score = donor_count > 0 ? donor_sum / donor_count : 1.0;
            predictions.push_back(std::move(p));
        }
    }
    return predictions;
}

std::vector<Prediction> detect_per_language_closest(const std::vector<DistanceRecord>& train,
                                                    const std::vector<DistanceRecord>& test,
                                                    Measure measure,
                                                    std::vector<std::string>* warnings) {
    double combined = calibrate_threshold(train, measure);

    std::map<std::string, std::vector<DistanceRecord>> by_language;
    for (const DistanceRecord& rec : train) by_language[rec.language].push_back(rec);

    std::map<std::string, double> thresholds;
    for (const auto& [language, records] : by_language) {
        try {
            thresholds[language] = calibrate_threshold(records, measure);
        } catch (const CalibrationError&) {
            emit_warning(warnings, "language " + language +
                                       " has one-class training data; using the combined threshold");
            thresholds[language] = combined;
        }
    }

    std::vector<Prediction> predictions;
    predictions.reserve(test.size());
    for (const DistanceRecord& rec : test) {
        auto it = thresholds.find(rec.language);
        double theta = it == thresholds.end() ? combined : it->second;
        const std::optional<double>& d = rec.distance(measure);
        Prediction p;
        p.form_id = rec.form_id;
        p.predicted = d.has_value() && *d < theta;
        p.score = d.value_or(1.0);
        predictions.push_back(std::move(p));
    }
    return predictions;
}

void write_predictions_tsv(const std::string& path, const std::vector<DistanceRecord>& records,
                           const std::vector<Prediction>& predictions) {
    if (records.size() != predictions.size()) {
        throw ShapeError("records and predictions differ in length");
    }
    std::map<std::string, const DistanceRecord*> by_id;
    for (const DistanceRecord& rec : records) by_id[rec.form_id] = &rec;

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write file: " + path);
    }
    out << "FORM_ID\tLANGUAGE\tCONCEPT\tGOLD\tPREDICTED\tSCORE\n";
    char buf[32];
    for (const Prediction& p : predictions) {
        auto it = by_id.find(p.form_id);
        if (it == by_id.end()) {
            throw ShapeError("prediction for unknown form id: " + p.form_id);
        }
        const DistanceRecord& rec = *it->second;
        std::snprintf(buf, sizeof buf, "%.6f", p.score);
        out << rec.form_id << '\t' << rec.language << '\t' << rec.concept_id << '\t'
            << (rec.gold ? '1' : '0') << '\t' << (p.predicted ? '1' : '0') << '\t' << buf << '\n';
    }
}

}  // namespace loandet
