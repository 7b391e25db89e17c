#!/usr/bin/env python3
"""Convert a CLDF wordlist export into the canonical six-column TSV.

The engine consumes a flat tab-separated file with columns
ID, LANGUAGE, CONCEPT, FORM, TOKENS, BORROWED. This script produces it from
a locally downloaded CLDF dataset directory (one containing cldf/forms.csv,
e.g. a checkout of https://github.com/lexibank/sabor or its Zenodo archive).
No network access: download the export manually, then run

    python3 scripts/prepare_dataset.py --source path/to/export \\
        --output data/wordlist.tsv --donor Spanish

or, equivalently, `loandet prepare --source path/to/export`.

Binarization rule for the gold label (the source data carries graded
borrowing judgments): a form counts as borrowed from the donor iff

  * its loan-source description names the donor language
    (substring match, case-insensitive, configurable via --donor-pattern), AND
  * its borrowed score is at least --min-borrowed-score (default 0.75, i.e.
    "probably borrowed" or stronger on the WOLD 0..1 scale; use 1.0 to keep
    only "clearly borrowed").

Forms of the donor language itself are always written with BORROWED=0.
Rows without phonetic segments are skipped and counted.
"""

import argparse
import csv
import os
import re
import sys

FORM_TABLE_CANDIDATES = ["cldf/forms.csv", "forms.csv"]
LANGUAGE_TABLE_CANDIDATES = ["cldf/languages.csv", "languages.csv"]

# Column aliases seen across lexibank-style exports.
COLUMNS = {
    "id": ["ID", "Local_ID"],
    "language": ["Language_ID", "Doculect", "LANGUAGE"],
    "concept": ["Parameter_ID", "Concept", "CONCEPT"],
    "form": ["Form", "Value", "FORM"],
    "segments": ["Segments", "Tokens", "TOKENS"],
    "borrowed_score": ["Borrowed_score", "BorrowedScore", "Borrowed_Score"],
    "borrowed": ["Borrowed", "Loan"],
    "donor": ["donor_language", "Donor_Language", "Source_languoid", "SourceLanguoid",
              "loan_source", "Source_Language"],
}


def find_table(source, candidates):
    for rel in candidates:
        path = os.path.join(source, rel)
        if os.path.exists(path):
            return path
    return None


def pick_column(fieldnames, aliases):
    for name in aliases:
        if name in fieldnames:
            return name
    return None


def borrowed_score(row, score_col, borrowed_col):
    """Graded borrowing judgment mapped to [0, 1]; None when unannotated."""
    if score_col and row.get(score_col, "").strip():
        try:
            return float(row[score_col])
        except ValueError:
            pass
    if borrowed_col and row.get(borrowed_col, "").strip():
        text = row[borrowed_col].strip().lower()
        # WOLD scale: "1. clearly borrowed" .. "5. no evidence for borrowing"
        m = re.match(r"([1-5])\.", text)
        if m:
            return (5 - int(m.group(1))) / 4.0
        if text in ("true", "yes", "1"):
            return 1.0
        if text in ("false", "no", "0"):
            return 0.0
    return None


def main():
    parser = argparse.ArgumentParser(
        description=__doc__.splitlines()[0],
        formatter_class=argparse.RawDescriptionHelpFormatter, epilog=__doc__)
    parser.add_argument("--source", required=True,
                        help="directory of the downloaded export (contains cldf/forms.csv)")
    parser.add_argument("--output", default="data/wordlist.tsv")
    parser.add_argument("--donor", default="Spanish",
                        help="donor language name as written in the LANGUAGE column")
    parser.add_argument("--donor-pattern", default=None,
                        help="regex matched against the loan source description "
                             "(default: the --donor name, case-insensitive)")
    parser.add_argument("--min-borrowed-score", type=float, default=0.75,
                        help="minimum borrowed score to count as borrowed (default 0.75)")
    args = parser.parse_args()

    forms_path = find_table(args.source, FORM_TABLE_CANDIDATES)
    if not forms_path:
        sys.exit("error: no forms.csv under %s (expected a CLDF export)" % args.source)

    # Map language ids to display names when a language table is present.
    language_name = {}
    languages_path = find_table(args.source, LANGUAGE_TABLE_CANDIDATES)
    if languages_path:
        with open(languages_path, encoding="utf-8", newline="") as fh:
            for row in csv.DictReader(fh):
                if row.get("ID") and row.get("Name"):
                    language_name[row["ID"]] = row["Name"]

    donor_pattern = re.compile(args.donor_pattern or re.escape(args.donor), re.IGNORECASE)

    written = 0
    skipped_no_segments = 0
    donor_rows = 0
    borrowed_rows = 0
    seen_ids = set()
    with open(forms_path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        cols = {key: pick_column(reader.fieldnames, aliases)
                for key, aliases in COLUMNS.items()}
        for key in ("id", "language", "concept", "form", "segments"):
            if not cols[key]:
                sys.exit("error: %s has no recognizable %s column (tried %s)"
                         % (forms_path, key, ", ".join(COLUMNS[key])))
        if not cols["borrowed_score"] and not cols["borrowed"]:
            sys.exit("error: %s carries no borrowing annotation column" % forms_path)

        os.makedirs(os.path.dirname(args.output) or ".", exist_ok=True)
        with open(args.output, "w", encoding="utf-8", newline="\n") as out:
            out.write("ID\tLANGUAGE\tCONCEPT\tFORM\tTOKENS\tBORROWED\n")
            for row in reader:
                segments = (row.get(cols["segments"]) or "").strip()
                # CLDF morpheme boundaries ("+") are alignment hints, not segments.
                segments = " ".join(s for s in segments.split() if s != "+")
                if not segments:
                    skipped_no_segments += 1
                    continue
                row_id = row[cols["id"]]
                if row_id in seen_ids:
                    sys.exit("error: duplicate form ID %s in %s" % (row_id, forms_path))
                seen_ids.add(row_id)
                language = language_name.get(row[cols["language"]], row[cols["language"]])
                concept = row[cols["concept"]]
                form = (row.get(cols["form"]) or "").strip() or segments.replace(" ", "")

                if language == args.donor:
                    borrowed = 0
                    donor_rows += 1
                else:
                    score = borrowed_score(row, cols["borrowed_score"], cols["borrowed"])
                    source_text = (row.get(cols["donor"]) or "") if cols["donor"] else ""
                    donor_named = bool(donor_pattern.search(source_text)) if source_text else False
                    # When the export has no per-form donor column, trust the
                    # score alone (single-donor datasets).
                    if cols["donor"]:
                        borrowed = int(donor_named and score is not None
                                       and score >= args.min_borrowed_score)
                    else:
                        borrowed = int(score is not None and score >= args.min_borrowed_score)
                borrowed_rows += borrowed

                for field in (row_id, language, concept, form):
                    if "\t" in field:
                        sys.exit("error: tab character inside field %r" % field)
                out.write("%s\t%s\t%s\t%s\t%s\t%d\n"
                          % (row_id, language, concept, form, segments, borrowed))
                written += 1

    if donor_rows == 0:
        sys.exit("error: donor language %r never occurs; check --donor" % args.donor)
    print("wrote %s: %d rows (%d donor, %d borrowed); %d rows without segments skipped"
          % (args.output, written, donor_rows, borrowed_rows, skipped_no_segments))


if __name__ == "__main__":
    main()
