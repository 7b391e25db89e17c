#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "loandet/phonology.hpp"
#include "loandet/wordlist.hpp"

namespace loandet {

enum class Measure { ned, sca };

const char* measure_name(Measure m);

// Per recipient form: minimum distance to the same-concept donor forms.
// Distances are absent when the concept has no donor form.
struct DistanceRecord {
    std::string form_id;
    std::string language;
    std::string concept_id;
    std::optional<double> ned_min;
    std::optional<double> sca_min;
    bool gold = false;

    const std::optional<double>& distance(Measure m) const {
        return m == Measure::ned ? ned_min : sca_min;
    }
};

struct Prediction {
    std::string form_id;
    bool predicted = false;
    double score = 0.0;  // distance for threshold methods, decision value for the classifier
};

// One record per recipient form whose concept is in `concepts`, in wordlist
// form order.
std::vector<DistanceRecord> build_distance_records(
    const Wordlist& wl, const std::vector<std::string>& concepts, const SoundClassModel& model,
    const AlignmentScoreScheme& scheme = {});

// Grid search over {0.00, 0.01, ..., 1.00}: the threshold maximizing F1 of
// "borrowed iff distance < threshold" on the given records, ties broken
// toward the smallest value. Needs at least one positive and one negative
// record with present distances.
double calibrate_threshold(const std::vector<DistanceRecord>& records, Measure measure);

// A record is borrowed iff its distance is present and below the threshold.
// Score is the distance, 1.0 when absent.
std::vector<Prediction> detect_closest_match(const std::vector<DistanceRecord>& records,
                                             Measure measure, double threshold);

// Average-linkage agglomeration over items 0..n-1: repeatedly merge the
// cluster pair with the smallest mean pairwise distance while that mean is
// below the threshold. Score ties break on the lexicographically smallest
// (id, id) pair of cluster representatives. Returns a cluster index per item.
std::vector<int> average_linkage_clusters(const std::vector<std::string>& ids,
                                          const std::function<double(std::size_t, std::size_t)>& dist,
                                          double threshold);

// Flat-clusters every concept's forms (donor and recipient together); a
// recipient form is borrowed iff its cluster contains a donor form. Score is
// the mean distance to the donor members of the cluster, 1.0 when none.
std::vector<Prediction> detect_cognate_based(const Wordlist& wl,
                                             const std::vector<std::string>& concepts,
                                             Measure measure, double threshold,
                                             const SoundClassModel& model,
                                             const AlignmentScoreScheme& scheme = {});

// Closest match with one threshold calibrated per target language on the
// training records. Languages with one-class training data fall back to the
// combined threshold with a warning.
std::vector<Prediction> detect_per_language_closest(const std::vector<DistanceRecord>& train,
                                                    const std::vector<DistanceRecord>& test,
                                                    Measure measure,
                                                    std::vector<std::string>* warnings = nullptr);

// Predictions as TSV: FORM_ID, LANGUAGE, CONCEPT, GOLD, PREDICTED, SCORE.
void write_predictions_tsv(const std::string& path, const std::vector<DistanceRecord>& records,
                           const std::vector<Prediction>& predictions);

}  // namespace loandet
