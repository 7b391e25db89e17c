#include "loandet/phonology.hpp"

#include <algorithm>
#include <unordered_set>

#include "loandet/errors.hpp"
#include "loandet/tsv.hpp"

namespace loandet {

void AlignmentScoreScheme::validate() const {
    if (!(match_same_class > match_same_kind && match_same_kind > 0 && 0 > match_cross_kind)) {
        throw DomainError("alignment scheme must satisfy same_class > same_kind > 0 > cross_kind");
    }
    if (!(initial_gap <= gap && gap < 0)) {
        throw DomainError("alignment scheme must satisfy initial_gap <= gap < 0");
    }
}

std::size_t edit_distance(const SegmentString& a, const SegmentString& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double ned(const SegmentString& a, const SegmentString& b) {
    if (a.empty() || b.empty()) {
        throw DomainError("ned: empty segment string");
    }
    return static_cast<double>(edit_distance(a, b)) /
           static_cast<double>(std::max(a.size(), b.size()));
}

std::vector<std::string> sound_classes(const SegmentString& a, const SoundClassModel& model,
                                       std::vector<std::string>* warnings) {
    std::vector<std::string> classes;
    classes.reserve(a.size());
    std::unordered_set<std::string> warned;
    for (const std::string& segment : a) {
        auto it = model.mapping.find(segment);
        if (it == model.mapping.end()) {
            if (warnings && warned.insert(segment).second) {
                emit_warning(warnings, "segment \"" + segment + "\" has no sound class");
            }
            classes.push_back(model.unknown_class);
        } else {
            classes.push_back(it->second);
        }
    }
    return classes;
}

namespace {

double substitution_score(const std::string& ca, const std::string& cb,
                          const SoundClassModel& model, const AlignmentScoreScheme& scheme) {
    if (ca == model.unknown_class || cb == model.unknown_class) {
        return scheme.match_cross_kind;
    }
    if (ca == cb) {
        return scheme.match_same_class;
    }
    return model.class_kind.at(ca) == model.class_kind.at(cb) ? scheme.match_same_kind
                                                              : scheme.match_cross_kind;
}

}  // namespace

double alignment_score(const std::vector<std::string>& a, const std::vector<std::string>& b,
                       const SoundClassModel& model, const AlignmentScoreScheme& scheme) {
    const std::size_t n = a.size(), m = b.size();
    // F[i][j] = best score aligning a[0..i) with b[0..j). A gap move at
    // i==1 (or j==1) consumes the word-initial segment and costs initial_gap.
    std::vector<std::vector<double>> F(n + 1, std::vector<double>(m + 1, 0.0));
    for (std::size_t i = 1; i <= n; ++i) {
        F[i][0] = F[i - 1][0] + (i == 1 ? scheme.initial_gap : scheme.gap);
    }
    for (std::size_t j = 1; j <= m; ++j) {
        F[0][j] = F[0][j - 1] + (j == 1 ? scheme.initial_gap : scheme.gap);
    }
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            double diag = F[i - 1][j - 1] + substitution_score(a[i - 1], b[j - 1], model, scheme);
            double up = F[i - 1][j] + (i == 1 ? scheme.initial_gap : scheme.gap);
            double left = F[i][j - 1] + (j == 1 ? scheme.initial_gap : scheme.gap);
            F[i][j] = std::max({diag, up, left});
        }
    }
    return F[n][m];
}

double sca_distance(const SegmentString& a, const SegmentString& b, const SoundClassModel& model,
                    const AlignmentScoreScheme& scheme) {
    if (a.empty() || b.empty()) {
        throw DomainError("sca_distance: empty segment string");
    }
    scheme.validate();
    std::vector<std::string> ca = sound_classes(a, model);
    std::vector<std::string> cb = sound_classes(b, model);
    double sab = alignment_score(ca, cb, model, scheme);
    double denom = alignment_score(ca, ca, model, scheme) + alignment_score(cb, cb, model, scheme);
    if (denom <= 0) {
        // Only reachable when the strings are dominated by unknown segments.
        return a == b ? 0.0 : 1.0;
    }
    return std::clamp(1.0 - 2.0 * sab / denom, 0.0, 1.0);
}

namespace detail {

SoundClassModel parse_sound_class_model(const std::vector<std::string>& lines,
                                        const std::string& origin) {
    if (lines.empty()) {
        throw DataError(origin + ": empty sound-class table");
    }
    std::vector<std::string> header = tsv::split_fields(lines[0]);
    if (header.size() < 3 || header[0] != "SEGMENT" || header[1] != "CLASS" || header[2] != "KIND") {
        throw DataError(origin + ": expected header SEGMENT\tCLASS\tKIND");
    }
    SoundClassModel model;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::vector<std::string> fields = tsv::split_fields(lines[i]);
        if (fields.size() < 3 || fields[0].empty() || fields[1].empty()) {
            throw DataError(origin + ": row " + std::to_string(i + 1) + ": malformed entry");
        }
        SegmentKind kind;
        if (fields[2] == "C") {
            kind = SegmentKind::consonant;
        } else if (fields[2] == "V") {
            kind = SegmentKind::vowel;
        } else {
            throw DataError(origin + ": row " + std::to_string(i + 1) + ": KIND must be C or V");
        }
        if (!model.mapping.emplace(fields[0], fields[1]).second) {
            throw DataError(origin + ": duplicate segment: " + fields[0]);
        }
        auto [it, inserted] = model.class_kind.emplace(fields[1], kind);
        if (!inserted && it->second != kind) {
            throw DataError(origin + ": class " + fields[1] + " mapped to both kinds");
        }
        if (fields[1] == model.unknown_class) {
            throw DataError(origin + ": class symbol \"" + model.unknown_class +
                            "\" is reserved for unmapped segments");
        }
    }
    return model;
}

}  // namespace detail

SoundClassModel load_sound_class_model(const std::string& path) {
    return detail::parse_sound_class_model(tsv::read_lines(path), path);
}

const SoundClassModel& default_sound_class_model() {
    static const SoundClassModel model = [] {
        std::vector<std::string> lines;
        std::string cur;
        for (const char* p = detail::embedded_sound_class_tsv(); *p; ++p) {
            if (*p == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else {
                cur += *p;
            }
        }
        if (!cur.empty()) lines.push_back(cur);
        return detail::parse_sound_class_model(lines, "<built-in table>");
    }();
    return model;
}

}  // namespace loandet
