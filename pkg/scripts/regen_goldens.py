#!/usr/bin/env python3
"""Re-run the pinned golden pipeline over the mini-corpus and store the outputs
under tests/data/golden. Run after any intentional output-format change, then
review the diff. Provenance files are dropped from the goldens (they embed the
manifest path, which depends on where the run happens); the acceptance test
checks them structurally instead."""

from __future__ import annotations

import csv
import shutil
import sys
from pathlib import Path

from ficnet.cli import main

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "tests" / "data" / "minicorpus"
GOLDEN = ROOT / "tests" / "data" / "golden"


def run() -> None:
    shutil.rmtree(GOLDEN, ignore_errors=True)
    GOLDEN.mkdir(parents=True)

    base = [
        "--manifest", str(CORPUS / "manifest.yaml"),
        "--lexicon", str(CORPUS / "lexicon.tsv"),
        "--seed", "0",
    ]
    rc = main(["extract", "--out", str(GOLDEN / "extract"), "--per-chapter", *base])
    if rc != 0:
        sys.exit(f"extract failed with exit code {rc}")
    rc = main(["report", "--out", str(GOLDEN / "report"), *base])
    if rc != 0:
        sys.exit(f"report failed with exit code {rc}")

    (GOLDEN / "extract" / "provenance.yaml").unlink()
    (GOLDEN / "report" / "provenance.yaml").unlink()

    # sanity: the planted female-weight effect must be flagged significant
    with (GOLDEN / "report" / "age_gender_weight.csv").open() as fh:
        for row in csv.DictReader(fh):
            assert float(row["w_female"]) > float(row["w_male"]), row
            assert row["significant"] == "true", row

    files = sorted(p.relative_to(GOLDEN) for p in GOLDEN.rglob("*") if p.is_file())
    print(f"wrote {len(files)} golden files under {GOLDEN}")


if __name__ == "__main__":
    run()
