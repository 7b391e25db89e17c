#include "loandet/wordlist.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "loandet/errors.hpp"
#include "loandet/tsv.hpp"

namespace loandet {

Wordlist::Wordlist(std::vector<WordForm> forms, std::string donor_language,
                   std::vector<std::string>* warnings)
    : forms_(std::move(forms)), donor_language_(std::move(donor_language)) {
    std::unordered_set<std::string> seen_ids;
    std::unordered_set<std::string> seen_languages;
    std::unordered_set<std::string> seen_concepts;
    bool donor_seen = false;

    for (std::size_t i = 0; i < forms_.size(); ++i) {
        WordForm& f = forms_[i];
        if (!seen_ids.insert(f.id).second) {
            throw DataError("duplicate form id: " + f.id);
        }
        if (f.language == donor_language_) {
            donor_seen = true;
            if (f.borrowed_from_donor) {
                emit_warning(warnings, "donor form " + f.id +
                                           " annotated as borrowed; forcing label to 0");
                f.borrowed_from_donor = false;
            }
        } else if (seen_languages.insert(f.language).second) {
            target_languages_.push_back(f.language);
        }
        if (seen_concepts.insert(f.concept_id).second) {
            concepts_.push_back(f.concept_id);
        }
        ConceptIndex& idx = by_concept_[f.concept_id];
        (f.language == donor_language_ ? idx.donor : idx.recipient).push_back(i);
        forms_per_language_[f.language]++;
        if (f.borrowed_from_donor) {
            borrowed_per_language_[f.language]++;
        }
    }
    if (!donor_seen) {
        throw ConfigError("donor language \"" + donor_language_ +
                          "\" does not occur in the wordlist");
    }
}

bool Wordlist::has_concept(const std::string& concept_id) const {
    return by_concept_.count(concept_id) > 0;
}

bool Wordlist::has_language(const std::string& language) const {
    return forms_per_language_.count(language) > 0;
}

ConceptView Wordlist::concept_view(const std::string& concept_id) const {
    auto it = by_concept_.find(concept_id);
    if (it == by_concept_.end()) {
        throw LookupError("unknown concept: " + concept_id);
    }
    ConceptView view;
    view.donor_forms.reserve(it->second.donor.size());
    view.recipient_forms.reserve(it->second.recipient.size());
    for (std::size_t i : it->second.donor) view.donor_forms.push_back(&forms_[i]);
    for (std::size_t i : it->second.recipient) view.recipient_forms.push_back(&forms_[i]);
    return view;
}

double Wordlist::borrowing_rate(const std::string& language) const {
    if (language == donor_language_) {
        throw DomainError("borrowing rate queried for the donor language");
    }
    auto it = forms_per_language_.find(language);
    if (it == forms_per_language_.end()) {
        throw LookupError("unknown language: " + language);
    }
    auto borrowed = borrowed_per_language_.find(language);
    std::size_t n = borrowed == borrowed_per_language_.end() ? 0 : borrowed->second;
    return static_cast<double>(n) / static_cast<double>(it->second);
}

std::size_t Wordlist::form_count(const std::string& language) const {
    auto it = forms_per_language_.find(language);
    return it == forms_per_language_.end() ? 0 : it->second;
}

namespace {

const char* kRequiredColumns[] = {"ID", "LANGUAGE", "CONCEPT", "FORM", "TOKENS", "BORROWED"};

SegmentString split_tokens(const std::string& tokens, std::size_t line_no) {
    SegmentString segments;
    std::size_t start = 0;
    while (true) {
        std::size_t space = tokens.find(' ', start);
        std::string token = space == std::string::npos ? tokens.substr(start)
                                                       : tokens.substr(start, space - start);
        if (token.empty()) {
            throw DataError("row " + std::to_string(line_no) +
                            ": empty segment token in TOKENS");
        }
        segments.push_back(std::move(token));
        if (space == std::string::npos) break;
        start = space + 1;
    }
    return segments;
}

}  // namespace

Wordlist load_wordlist(const std::string& path, const std::string& donor_language,
                       std::vector<std::string>* warnings) {
    std::vector<std::string> lines = tsv::read_lines(path);
    if (lines.empty()) {
        throw DataError("empty wordlist file: " + path);
    }

    std::vector<std::string> header = tsv::split_fields(lines[0]);
    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < header.size(); ++i) {
        column[header[i]] = i;
    }
    for (const char* name : kRequiredColumns) {
        if (!column.count(name)) {
            throw DataError("missing required column: " + std::string(name));
        }
    }
    if (header.size() > 6) {
        std::unordered_set<std::string> required(std::begin(kRequiredColumns),
                                                 std::end(kRequiredColumns));
        for (const std::string& name : header) {
            if (!required.count(name)) {
                emit_warning(warnings, "ignoring extra column: " + name);
            }
        }
    }

    std::vector<WordForm> forms;
    forms.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::size_t line_no = i + 1;
        std::vector<std::string> fields = tsv::split_fields(lines[i]);
        if (fields.size() < header.size()) {
            throw DataError("row " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        WordForm f;
        f.id = fields[column["ID"]];
        f.language = fields[column["LANGUAGE"]];
        f.concept_id = fields[column["CONCEPT"]];
        f.form = fields[column["FORM"]];
        const std::string& tokens = fields[column["TOKENS"]];
        if (tokens.empty()) {
            throw DataError("row " + std::to_string(line_no) + ": empty TOKENS cell");
        }
        f.segments = split_tokens(tokens, line_no);
        const std::string& borrowed = fields[column["BORROWED"]];
        if (borrowed == "0") {
            f.borrowed_from_donor = false;
        } else if (borrowed == "1") {
            f.borrowed_from_donor = true;
        } else {
            throw DataError("row " + std::to_string(line_no) + ": BORROWED must be 0 or 1, got \"" +
                            borrowed + "\"");
        }
        forms.push_back(std::move(f));
    }
    return Wordlist(std::move(forms), donor_language, warnings);
}

void save_wordlist(const Wordlist& wl, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write file: " + path);
    }
    out << "ID\tLANGUAGE\tCONCEPT\tFORM\tTOKENS\tBORROWED\n";
    for (const WordForm& f : wl.forms()) {
        out << f.id << '\t' << f.language << '\t' << f.concept_id << '\t' << f.form << '\t';
        for (std::size_t i = 0; i < f.segments.size(); ++i) {
            if (i > 0) out << ' ';
            out << f.segments[i];
        }
        out << '\t' << (f.borrowed_from_donor ? '1' : '0') << '\n';
    }
}

}  // namespace loandet
