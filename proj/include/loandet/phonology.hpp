#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "loandet/wordlist.hpp"

namespace loandet {

enum class SegmentKind { consonant, vowel };

// Coarse sound classes for alignment. Unmapped segments fall back to
// unknown_class, which scores like a cross-kind mismatch against everything,
// itself included.
struct SoundClassModel {
    std::unordered_map<std::string, std::string> mapping;     // segment -> class
    std::unordered_map<std::string, SegmentKind> class_kind;  // class -> kind
    std::string unknown_class = "?";

    const std::string& class_of(const std::string& segment) const {
        auto it = mapping.find(segment);
        return it == mapping.end() ? unknown_class : it->second;
    }
};

struct AlignmentScoreScheme {
    double match_same_class = 2.0;
    double match_same_kind = 1.0;
    double match_cross_kind = -1.0;
    double gap = -1.0;
    double initial_gap = -1.5;

    void validate() const;
};

// Unit-cost Levenshtein distance over segment tokens.
std::size_t edit_distance(const SegmentString& a, const SegmentString& b);

// Edit distance divided by the longer word's length. Both inputs non-empty.
double ned(const SegmentString& a, const SegmentString& b);

// Maps each segment to its sound class; unmapped segments get
// unknown_class, warned once per distinct segment.
std::vector<std::string> sound_classes(const SegmentString& a, const SoundClassModel& model,
                                       std::vector<std::string>* warnings = nullptr);

// Global alignment score between two class sequences. Gaps consuming the
// first segment of either word cost initial_gap, all others cost gap.
double alignment_score(const std::vector<std::string>& a, const std::vector<std::string>& b,
                       const SoundClassModel& model, const AlignmentScoreScheme& scheme);

// Sound-class alignment distance: 1 - 2*S(a,b)/(S(a,a)+S(b,b)), clamped to
// [0,1]. Identical strings give 0.
double sca_distance(const SegmentString& a, const SegmentString& b, const SoundClassModel& model,
                    const AlignmentScoreScheme& scheme = {});

// Loads a sound-class table: TSV with columns SEGMENT, CLASS, KIND
// (KIND is C or V, describing the class).
SoundClassModel load_sound_class_model(const std::string& path);

// The table shipped with the library (Dolgopolsky-style consonant classes,
// a merged vowel class, glide classes W and J).
const SoundClassModel& default_sound_class_model();

namespace detail {
const char* embedded_sound_class_tsv();
SoundClassModel parse_sound_class_model(const std::vector<std::string>& lines,
                                        const std::string& origin);
}  // namespace detail

}  // namespace loandet
