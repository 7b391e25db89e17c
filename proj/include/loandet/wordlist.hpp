#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace loandet {

// One phonetic segment per token, pre-segmented upstream. Tokens are opaque
// text units; the engine never inspects them beyond equality.
using SegmentString = std::vector<std::string>;

struct WordForm {
    std::string id;        // unique within a wordlist
    std::string language;
    std::string concept_id;
    std::string form;      // display form, not used for comparison
    SegmentString segments;
    bool borrowed_from_donor = false;
};

struct ConceptView {
    std::vector<const WordForm*> donor_forms;
    std::vector<const WordForm*> recipient_forms;
};

// Immutable multilingual wordlist with a designated donor language.
// Safe for concurrent reads once constructed.
class Wordlist {
public:
    Wordlist(std::vector<WordForm> forms, std::string donor_language,
             std::vector<std::string>* warnings = nullptr);

    const std::vector<WordForm>& forms() const { return forms_; }
    const std::string& donor_language() const { return donor_language_; }

    // All non-donor languages in first-appearance order.
    const std::vector<std::string>& target_languages() const { return target_languages_; }

    // All concepts in first-appearance order.
    const std::vector<std::string>& concepts() const { return concepts_; }

    bool has_concept(const std::string& concept_id) const;
    bool has_language(const std::string& language) const;

    // Donor and recipient forms of one concept; either side may be empty.
    ConceptView concept_view(const std::string& concept_id) const;

    // Fraction of a target language's forms carrying the gold borrowed label.
    double borrowing_rate(const std::string& language) const;

    std::size_t form_count(const std::string& language) const;

private:
    std::vector<WordForm> forms_;
    std::string donor_language_;
    std::vector<std::string> target_languages_;
    std::vector<std::string> concepts_;
    struct ConceptIndex {
        std::vector<std::size_t> donor;
        std::vector<std::size_t> recipient;
    };
    std::unordered_map<std::string, ConceptIndex> by_concept_;
    std::unordered_map<std::string, std::size_t> forms_per_language_;
    std::unordered_map<std::string, std::size_t> borrowed_per_language_;
};

// Loads the canonical tab-separated wordlist. Required header columns:
// ID, LANGUAGE, CONCEPT, FORM, TOKENS, BORROWED (0/1). TOKENS holds the
// space-separated segments. Extra columns are ignored with a warning.
Wordlist load_wordlist(const std::string& path, const std::string& donor_language,
                       std::vector<std::string>* warnings = nullptr);

// Writes the canonical six-column TSV; reloading yields an identical wordlist.
void save_wordlist(const Wordlist& wl, const std::string& path);

}  // namespace loandet
