#!/usr/bin/env python3
"""Deterministic synthetic wordlist fixture for the acceptance suite.

Produces data/synthetic_wordlist.tsv: a canonical six-column wordlist
(ID, LANGUAGE, CONCEPT, FORM, TOKENS, BORROWED) with one donor language and
seven target languages. The fixture is NOT real linguistic data. It is a
statistical replica of the public dataset the engine is normally run on
(https://github.com/lexibank/sabor): same language/concept/lexeme counts,
the same aggregate borrowing rate (15.2%), and noise processes tuned so the
detection methods land in the same metric regime. Use `loandet prepare` on
the real export whenever it is available.

Generation model, per target language:
  * borrowed forms copy a donor form of the same concept, then undergo
    nativization (segments missing from the target inventory are replaced by
    same-sound-class equivalents) plus random adaptation; heavier adaptation
    for languages that borrow less (this drives the recall/borrowing-rate
    correlation);
  * a slice of borrowings copy a donor form of a *different* concept
    (semantic shift) or keep a native suffix (partial borrowing) - those are
    the irreducible recall errors;
  * native forms are random words over the language inventory, except for a
    small "lookalike" slice derived from same-concept donor forms through
    cross-kind substitutions and word-initial indels - the precision errors.

Rerunning the script reproduces the file byte for byte (fixed seed).
"""

import argparse
import random

# ---------------------------------------------------------------------------
# Inventories. Classes follow data/soundclasses.tsv.

CLASS_OF = {}
KIND_OF = {}


def _cls(symbols, cls, kind):
    for s in symbols.split():
        CLASS_OF[s] = cls
        KIND_OF[s] = kind


_cls("a e i o u ə ɨ ʉ ɯ ɛ ɔ æ ʊ ɪ ã ẽ ĩ õ ũ ə̃ ɛ̃ ɔ̃ aː eː iː oː uː", "V", "V")
_cls("p b f ɸ pʰ pʼ", "P", "C")
_cls("t d θ ð tʰ tʼ t̪", "T", "C")
_cls("s z ʃ ʒ ʂ ts dz tʃ dʒ tsʼ tʃʼ ɬ tɬ", "S", "C")
_cls("k g q x ɣ χ kʰ kʼ kʷ qʼ c ç", "K", "C")
_cls("m", "M", "C")
_cls("n ɲ ŋ ɳ", "N", "C")
_cls("r l ɾ ʎ ɭ ʀ", "R", "C")
_cls("w v β ʋ", "W", "C")
_cls("j ʝ", "J", "C")
_cls("h ɦ ʔ", "H", "C")

DONOR_INVENTORY = (
    "p b t d k g f s x tʃ m n ɲ l ʎ r ɾ w j β ð ɣ ʝ a e i o u".split()
)

# Cross-linguistically common segments dominate word shapes; rare segments
# appear but stay rare, keeping donor words mostly nativizable.
CORE_SEGMENTS = set("p t k b d g s m n l r w j a e i o u".split())


# (name, concepts, lexemes, borrowed, inventory, knobs)
# knobs: sub       extra same-class substitution rate per segment
#        cross     same-kind cross-class substitution rate per segment
#        indel     insertion/deletion rate per segment
#        heavy     fraction of borrowings with strong distortion
#        look      lookalike fraction among native forms
#        weak_look additional weak-lookalike fraction among native forms
LANGUAGES = [
    ("lang1", 1155, 1156, 320,
     "p t k q s ʃ tʃ m n ɲ l ʎ r w j h a i u ə kʼ tʼ qʼ tsʼ ts e o b d g".split(),
     dict(sub=0.10, cross=0.025, indel=0.02, heavy=0.08, look=0.050, weak_look=0.05)),
    ("lang2", 1040, 1242, 199,
     "p t k tʃ θ s ʃ ɣ m n ɲ ŋ l ʎ r ɾ w j a e i o u ɨ ə f b d g".split(),
     dict(sub=0.10, cross=0.025, indel=0.02, heavy=0.15, look=0.050, weak_look=0.05)),
    ("lang3", 1252, 2241, 215,
     ("p b t d k g kʷ ʔ f θ s ʃ z ʒ x h ts tʃ m n ɲ l r w j "
      "a e i o u ə ɨ ɛ ɔ æ ã ẽ ĩ õ ũ ə̃ ɛ̃ ɔ̃ aː eː iː oː uː pʰ tʰ kʰ ʎ ɾ β ð ɣ").split(),
     dict(sub=0.10, cross=0.025, indel=0.02, heavy=0.19, look=0.045, weak_look=0.05)),
    ("lang4", 1211, 1773, 170,
     "p b t k q ʔ s ʃ x tʃ tsʼ tʃʼ kʼ qʼ tʼ pʼ m n l r w j h a e i o u aː eː iː oː uː d g".split(),
     dict(sub=0.10, cross=0.025, indel=0.02, heavy=0.19, look=0.045, weak_look=0.05)),
    ("lang5", 1128, 1219, 156,
     "p t k kʼ ʔ f s ʃ x h ts tʃ tsʼ tʃʼ m n l ɬ tɬ w j a e i o u ə ɛ ɔ b d g".split(),
     dict(sub=0.10, cross=0.025, indel=0.02, heavy=0.16, look=0.050, weak_look=0.05)),
    ("lang6", 1242, 1433, 336,
     "p t k b d g tʃ s z m n l r ɾ w j h ʔ a e i o u ə".split(),
     dict(sub=0.10, cross=0.025, indel=0.02, heavy=0.09, look=0.050, weak_look=0.05)),
    ("lang7", 955, 1266, 175,
     "p b t k ʔ ts tʃ tsʼ tʃʼ kʼ pʼ tʼ s ʃ x h m n ɲ l r v j a e i o u ɨ d g".split(),
     dict(sub=0.10, cross=0.025, indel=0.02, heavy=0.16, look=0.050, weak_look=0.05)),
]

DONOR_NAME = "donor"
N_CONCEPTS = 1308
DONOR_LEXEMES = 1770
P_SHIFT = 0.135    # borrowings copied from a donor form of another concept
P_PARTIAL = 0.04  # borrowings keeping a native suffix
P_COGNATE_LOOK = 0.010  # natives that shadow a donor form class by class


def weighted_pick(rng, pool):
    weights = [4 if s in CORE_SEGMENTS else 1 for s in pool]
    return rng.choices(pool, weights=weights)[0]


def make_word(rng, inventory):
    consonants = [s for s in inventory if KIND_OF[s] == "C"]
    vowels = [s for s in inventory if KIND_OF[s] == "V"]
    n_syllables = rng.choices([2, 3, 4], weights=[45, 40, 15])[0]
    word = []
    for i in range(n_syllables):
        if rng.random() < 0.9 or i == 0:
            word.append(weighted_pick(rng, consonants))
        word.append(weighted_pick(rng, vowels))
        if rng.random() < 0.22:
            word.append(weighted_pick(rng, consonants))
    return word


def same_class_substitute(rng, segment, inventory):
    options = [s for s in inventory if CLASS_OF[s] == CLASS_OF[segment] and s != segment]
    if not options:
        options = [s for s in inventory
                   if KIND_OF[s] == KIND_OF[segment] and s != segment]
    return rng.choice(options) if options else segment


def nativize(rng, word, inventory, nativization):
    out = []
    for seg in word:
        if seg in inventory:
            out.append(seg)
        else:
            if seg not in nativization:
                nativization[seg] = same_class_substitute(rng, seg, inventory)
            out.append(nativization[seg])
    return out


def adapt(rng, word, inventory, knobs, heavy):
    # Heavy distortion is an absolute regime, not a multiple of the light
    # one: those borrowings are meant to sit clearly above any threshold.
    sub = 0.40 if heavy else knobs["sub"]
    cross = 0.18 if heavy else knobs["cross"]
    indel = 0.14 if heavy else knobs["indel"]
    out = []
    for seg in word:
        r = rng.random()
        if r < indel / 2:
            continue  # deletion
        if r < indel / 2 + sub:
            out.append(same_class_substitute(rng, seg, inventory))
        elif r < indel / 2 + sub + cross:
            pool = [s for s in inventory
                    if KIND_OF[s] == KIND_OF[seg] and CLASS_OF[s] != CLASS_OF[seg]]
            out.append(rng.choice(pool) if pool else seg)
        else:
            out.append(seg)
        if rng.random() < indel / 2:
            out.append(rng.choice(inventory))
    return out if out else [rng.choice(inventory)]


def lookalike(rng, word, inventory, weak):
    """Native word that resembles a donor form by chance or shared ancestry.

    Mutations lean on cross-kind substitutions and word-initial indels, which
    the class-based alignment penalizes harder than plain edit distance does.
    """
    out = list(word)
    n_mut = rng.choice([3, 4]) if not weak else rng.choice([4, 5, 6])
    for _ in range(n_mut):
        kind = rng.random()
        pos = rng.randrange(len(out))
        if kind < 0.55:
            # cross-kind substitution
            pool = [s for s in inventory if KIND_OF[s] != KIND_OF[out[pos]]]
            if pool:
                out[pos] = rng.choice(pool)
        elif kind < 0.8:
            out.insert(0, rng.choice([s for s in inventory if KIND_OF[s] == "C"]))
        else:
            pool = [s for s in inventory if s != out[pos]]
            if pool:
                out[pos] = rng.choice(pool)
    return nativize(rng, out, inventory, {})


def cognate_lookalike(rng, word, inventory):
    """Native word shadowing a donor form within the same sound classes.

    Models inherited material or old, unlabeled loans: invisible to the
    class-based alignment, partly visible to plain edit distance.
    """
    out = nativize(rng, list(word), inventory, {})
    positions = list(range(len(out)))
    rng.shuffle(positions)
    for pos in positions[:rng.choice([2, 3])]:
        out[pos] = same_class_substitute(rng, out[pos], inventory)
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--output", default="data/synthetic_wordlist.tsv")
    parser.add_argument("--seed", type=int, default=20230201)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    concepts = ["c%04d" % (i + 1) for i in range(N_CONCEPTS)]

    # Donor: every concept covered; the surplus lexemes are second forms
    # (near-synonyms) for a random slice of concepts.
    donor_forms = {c: [make_word(rng, DONOR_INVENTORY)] for c in concepts}
    for c in rng.sample(concepts, DONOR_LEXEMES - N_CONCEPTS):
        donor_forms[c].append(make_word(rng, DONOR_INVENTORY))

    rows = []

    def emit(lang, concept, word, borrowed):
        rows.append((lang, concept, word, borrowed))

    for c in concepts:
        for w in donor_forms[c]:
            emit(DONOR_NAME, c, w, 0)

    for name, n_concepts, n_lexemes, n_borrowed, inventory, knobs in LANGUAGES:
        lang_concepts = rng.sample(concepts, n_concepts)
        # Surplus lexemes are second forms for random concepts of the language.
        slots = list(lang_concepts)
        slots += rng.sample(lang_concepts, n_lexemes - n_concepts)
        borrowed_slots = set(rng.sample(range(len(slots)), n_borrowed))
        nativization = {}

        for slot, concept in enumerate(slots):
            if slot in borrowed_slots:
                r = rng.random()
                source_concept = concept
                if r < P_SHIFT:
                    source_concept = rng.choice(concepts)
                source = rng.choice(donor_forms[source_concept])
                word = nativize(rng, source, inventory, nativization)
                heavy = rng.random() < knobs["heavy"]
                word = adapt(rng, word, inventory, knobs, heavy)
                if r >= P_SHIFT and r < P_SHIFT + P_PARTIAL:
                    word = word + make_word(rng, inventory)[:2]
                emit(name, concept, word, 1)
            else:
                r = rng.random()
                if r < knobs["look"] + knobs["weak_look"]:
                    source = rng.choice(donor_forms[concept])
                    word = lookalike(rng, source, inventory, weak=r < knobs["weak_look"])
                elif r < knobs["look"] + knobs["weak_look"] + P_COGNATE_LOOK:
                    word = cognate_lookalike(rng, rng.choice(donor_forms[concept]), inventory)
                else:
                    word = make_word(rng, inventory)
                emit(name, concept, word, 0)

    counters = {}
    with open(args.output, "w", encoding="utf-8", newline="\n") as out:
        out.write("ID\tLANGUAGE\tCONCEPT\tFORM\tTOKENS\tBORROWED\n")
        for lang, concept, word, borrowed in rows:
            counters[lang] = counters.get(lang, 0) + 1
            row_id = "%s-%04d" % (lang, counters[lang])
            out.write("%s\t%s\t%s\t%s\t%s\t%d\n"
                      % (row_id, lang, concept, "".join(word), " ".join(word), borrowed))

    total = sum(counters.values())
    borrowed_total = sum(1 for r in rows if r[3])
    recipient_total = total - counters[DONOR_NAME]
    print("wrote %s: %d lexemes, %d concepts, %d languages" %
          (args.output, total, N_CONCEPTS, len(LANGUAGES) + 1))
    print("recipient forms: %d, borrowed: %d (%.4f)" %
          (recipient_total, borrowed_total, borrowed_total / recipient_total))


if __name__ == "__main__":
    main()
