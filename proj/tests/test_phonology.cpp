#include <doctest.h>

#include <algorithm>
#include <random>

#include "loandet/errors.hpp"
#include "loandet/phonology.hpp"
#include "test_util.hpp"

using namespace loandet;
using testutil::tokens;
using testutil::toy_model;

namespace {

// Independent oracle: plain exponential recursion, only usable for short
// strings. Kept deliberately separate from the DP implementation.
std::size_t brute_edit_distance(const SegmentString& a, const SegmentString& b, std::size_t i,
                                std::size_t j) {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    std::size_t best = brute_edit_distance(a, b, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, brute_edit_distance(a, b, i + 1, j) + 1);
    best = std::min(best, brute_edit_distance(a, b, i, j + 1) + 1);
    return best;
}

}  // namespace

TEST_CASE("ned basics") {
    CHECK(ned(tokens("p e s o"), tokens("p e s o")) == 0.0);
    CHECK(ned(tokens("a b c"), tokens("x y z")) == 1.0);
    CHECK(ned(tokens("k a s a"), tokens("k a s")) == doctest::Approx(0.25));
    CHECK_THROWS_AS(ned({}, tokens("a")), DomainError);
    CHECK_THROWS_AS(ned(tokens("a"), {}), DomainError);
}

TEST_CASE("ned equals the brute-force oracle on short strings") {
    std::mt19937 rng(101);
    for (int iter = 0; iter < 300; ++iter) {
        SegmentString a = testutil::random_segments(rng, 6);
        SegmentString b = testutil::random_segments(rng, 6);
        std::size_t expected = brute_edit_distance(a, b, 0, 0);
        CHECK(edit_distance(a, b) == expected);
        CHECK(ned(a, b) == doctest::Approx(static_cast<double>(expected) /
                                           std::max(a.size(), b.size())));
    }
}

TEST_CASE("edit distance satisfies the triangle inequality") {
    std::mt19937 rng(102);
    for (int iter = 0; iter < 300; ++iter) {
        SegmentString a = testutil::random_segments(rng, 8);
        SegmentString b = testutil::random_segments(rng, 8);
        SegmentString c = testutil::random_segments(rng, 8);
        CHECK(edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c));
    }
}

TEST_CASE("sound_classes maps segments and tolerates unknowns") {
    SoundClassModel m = toy_model();
    CHECK(sound_classes(tokens("p e s o"), m) == std::vector<std::string>{"P", "V", "S", "V"});

    std::vector<std::string> warnings;
    std::vector<std::string> classes = sound_classes(tokens("p ǂ o"), m, &warnings);
    CHECK(classes == std::vector<std::string>{"P", m.unknown_class, "V"});
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("ǂ") != std::string::npos);

    // Repeated unknown segment warns once per call.
    warnings.clear();
    sound_classes(tokens("ǂ ǂ ǂ"), m, &warnings);
    CHECK(warnings.size() == 1);

    SoundClassModel empty;
    CHECK(sound_classes(tokens("p e"), empty) ==
          std::vector<std::string>{empty.unknown_class, empty.unknown_class});
}

TEST_CASE("sca_distance hand-worked values") {
    SoundClassModel m = toy_model();

    CHECK(sca_distance(tokens("p e s o"), tokens("p e s o"), m) == 0.0);

    // S(kasa,kasa)=8, S(kas,kas)=6, S(kasa,kas)=5: three same-class matches
    // and one non-initial gap. 1 - 10/14 = 2/7.
    CHECK(sca_distance(tokens("k a s a"), tokens("k a s"), m) == doctest::Approx(2.0 / 7.0));

    // Single vowel vs single consonant: best score is the cross-kind
    // substitution (-1); the raw value 1.5 exercises the clamp.
    CHECK(sca_distance(tokens("a"), tokens("k"), m) == 1.0);

    CHECK_THROWS_AS(sca_distance({}, tokens("a"), m), DomainError);
}

TEST_CASE("sca_distance gap cost depends on word-initial position") {
    SoundClassModel m = toy_model();
    // (pat, at): gapping word-initial p costs -1.5, so S = -1.5 + 2 + 2 = 2.5,
    // denominators 6 and 4 -> 1 - 5/10 = 0.5.
    CHECK(sca_distance(tokens("p a t"), tokens("a t"), m) == doctest::Approx(0.5));
    // (pat, pa): the trailing gap costs -1, S = 2 + 2 - 1 = 3 -> 1 - 6/10.
    CHECK(sca_distance(tokens("p a t"), tokens("p a"), m) == doctest::Approx(0.4));
}

TEST_CASE("sca_distance same-kind substitutions score between match and mismatch") {
    SoundClassModel m = toy_model();
    // (pa, ta): P/T same kind (+1) then V/V (+2): S=3, denom 8 -> 0.25.
    CHECK(sca_distance(tokens("p a"), tokens("t a"), m) == doctest::Approx(0.25));
    double same_kind = sca_distance(tokens("p a"), tokens("t a"), m);
    double cross_kind = sca_distance(tokens("p a"), tokens("a a"), m);
    CHECK(same_kind < cross_kind);
}

TEST_CASE("unknown segments score as cross-kind even against themselves") {
    SoundClassModel m = toy_model();
    // (ǂ a, ǂ a): unknown/unknown scores -1, V/V +2 -> S(a,b)=1, and the
    // self-scores are also 1, so the distance is 0 for the identical pair.
    CHECK(sca_distance(tokens("ǂ a"), tokens("ǂ a"), m) == doctest::Approx(0.0));
    // Different unknowns are indistinguishable to the scorer: still -1.
    CHECK(sca_distance(tokens("ǂ a"), tokens("ǃ a"), m) == doctest::Approx(0.0));
}

TEST_CASE("alignment scheme invariants are validated") {
    SoundClassModel m = toy_model();
    AlignmentScoreScheme bad;
    bad.match_same_kind = 3.0;  // breaks same_class > same_kind
    CHECK_THROWS_AS(sca_distance(tokens("a"), tokens("a"), m, bad), DomainError);
    bad = {};
    bad.gap = 0.5;  // gap must be negative
    CHECK_THROWS_AS(sca_distance(tokens("a"), tokens("a"), m, bad), DomainError);
}

TEST_CASE("distance properties: symmetry, identity, range") {
    SoundClassModel m = toy_model();
    std::mt19937 rng(103);
    for (int iter = 0; iter < 300; ++iter) {
        SegmentString a = testutil::random_segments(rng, 7);
        SegmentString b = testutil::random_segments(rng, 7);

        double dn = ned(a, b);
        double ds = sca_distance(a, b, m);
        CHECK(dn == ned(b, a));
        CHECK(ds == sca_distance(b, a, m));
        CHECK(dn >= 0.0);
        CHECK(dn <= 1.0);
        CHECK(ds >= 0.0);
        CHECK(ds <= 1.0);
        CHECK(ned(a, a) == 0.0);
        CHECK(sca_distance(a, a, m) == 0.0);
        if (dn == 0.0) CHECK(a == b);
    }
}

TEST_CASE("sca_distance clamp holds on adversarial cross-kind inputs") {
    SoundClassModel m = toy_model();
    std::mt19937 rng(104);
    const std::vector<std::string> consonants = {"p", "t", "k", "s"};
    const std::vector<std::string> vowels = {"a", "e", "i", "o"};
    for (int iter = 0; iter < 100; ++iter) {
        SegmentString a, b;
        std::size_t n = 1 + rng() % 5;
        for (std::size_t i = 0; i < n; ++i) {
            a.push_back(consonants[rng() % consonants.size()]);
            b.push_back(vowels[rng() % vowels.size()]);
        }
        double d = sca_distance(a, b, m);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
    }
}

TEST_CASE("appending a shared same-class segment never increases sca_distance") {
    SoundClassModel m = toy_model();
    std::mt19937 rng(105);
    for (int iter = 0; iter < 200; ++iter) {
        SegmentString a = testutil::random_segments(rng, 6);
        SegmentString b = testutil::random_segments(rng, 6);
        double before = sca_distance(a, b, m);
        SegmentString ax = a, bx = b;
        ax.push_back("m");
        bx.push_back("m");
        CHECK(sca_distance(ax, bx, m) <= before + 1e-12);
    }
}

TEST_CASE("sound-class table loading") {
    const SoundClassModel& dflt = default_sound_class_model();
    CHECK(dflt.class_of("tʃ") == "S");
    CHECK(dflt.class_of("a") == "V");
    CHECK(dflt.class_of("ɡ") == "K");
    CHECK(dflt.class_of("g") == "K");
    CHECK(dflt.class_of("zz-not-a-segment") == dflt.unknown_class);
    CHECK(dflt.class_kind.at("V") == SegmentKind::vowel);
    CHECK(dflt.class_kind.at("S") == SegmentKind::consonant);

    SUBCASE("file round trip") {
        testutil::TempFile file("SEGMENT\tCLASS\tKIND\np\tP\tC\na\tV\tV\n");
        SoundClassModel m = load_sound_class_model(file.path());
        CHECK(m.class_of("p") == "P");
        CHECK(m.class_of("a") == "V");
    }
    SUBCASE("bad kind") {
        testutil::TempFile file("SEGMENT\tCLASS\tKIND\np\tP\tX\n");
        CHECK_THROWS_AS(load_sound_class_model(file.path()), DataError);
    }
    SUBCASE("class with two kinds") {
        testutil::TempFile file("SEGMENT\tCLASS\tKIND\np\tP\tC\nq\tP\tV\n");
        CHECK_THROWS_AS(load_sound_class_model(file.path()), DataError);
    }
    SUBCASE("duplicate segment") {
        testutil::TempFile file("SEGMENT\tCLASS\tKIND\np\tP\tC\np\tT\tC\n");
        CHECK_THROWS_AS(load_sound_class_model(file.path()), DataError);
    }
    SUBCASE("reserved class symbol") {
        testutil::TempFile file("SEGMENT\tCLASS\tKIND\np\t?\tC\n");
        CHECK_THROWS_AS(load_sound_class_model(file.path()), DataError);
    }
    SUBCASE("bad header") {
        testutil::TempFile file("SEG\tCLS\tK\np\tP\tC\n");
        CHECK_THROWS_AS(load_sound_class_model(file.path()), DataError);
    }
}
