#!/usr/bin/env python3
"""Build data/seed.ontology.json from data/rating_table.csv.

The table only lists averages, so each entry gets six per-category overrides
whose sum is 6 * average, spread as evenly as half-point steps allow.

    python3 scripts/make_seed_corpus.py [--build build]
"""
import argparse
import csv
import json
import sys
from collections import Counter
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
CATEGORIES = ["software", "specification", "dataset", "metrics", "reference", "documentation"]
DATE_ADDED = "2025-09-01"

TITLES = {
    "nguyen2023climatelearnbenchmarkingmachinelearning": "ClimateLearn",
    "farrell2021mlperfhpcholisticbenchmark": "MLPerf HPC",
    "duarte2022fastml": "FastML Science Benchmarks",
    "duarte2022fastmlsciencebenchmarksaccelerating2": "FastML Science Benchmarks",
    "hu2021opengraphbenchmarkdatasets": "Open Graph Benchmark",
    "takamoto2024pdebenchextensivebenchmarkscientific": "PDEBench",
    "luo2024cfdbenchlargescalebenchmarkmachine": "CFDBench",
    "khrabrov2024nabla2dftuniversalquantumchemistry": "nabla2DFT",
    "krause2024calochallenge2022communitychallenge": "CaloChallenge 2022",
    "rein2023gpqagraduatelevelgoogleproofqa": "GPQA",
    "rein2023gpqagraduatelevelgoogleproofqa2": "GPQA",
    "glazer2024frontiermathbenchmarkevaluatingadvanced": "FrontierMath",
    "hendrycks2021measuring": "MATH",
    "lightman2023lets": "PRM800K",
    "www-aime": "AIME",
    "allenai:arc": "ARC",
    "tian2024scicoderesearchcodingbenchmark": "SciCode",
    "cui2025curieevaluatingllmsmultitask": "CURIE",
    "mudur2025feabenchevaluatinglanguagemodels": "FEABench",
    "pramanick2025spiqadatasetmultimodalquestion": "SPIQA",
    "zhong2024spiqa": "SPIQA",
    "liu2021braggnnfastxraybragg": "BraggNN",
    "roberts2023satin": "SATIN",
    "jain2013materials": "Materials Project",
    "jin2020diseasedoespatienthave": "MedQA",
    "quench2024": "Quench detection",
    "chanussot2021oc20,tran2023oc22,doi:10.1021/acscatal.0c04525,tran2023b": "Open Catalyst",
}


def slugify(text):
    out, dash = [], False
    for ch in text:
        if ch.isascii() and ch.isalnum():
            if dash and out:
                out.append("-")
            dash = False
            out.append(ch.lower())
        else:
            dash = True
    return "".join(out)


def overrides_for(average):
    halves = round(Fraction(average) * 12)  # 6 categories, half-point units
    base, extra = divmod(halves, 6)
    scores = [Fraction(base + (1 if i < extra else 0), 2) for i in range(6)]
    out = {}
    for name, s in zip(CATEGORIES, scores):
        out[name] = str(s.numerator) if s.denominator == 1 else f"{s.numerator}/{s.denominator}"
    return out


def build(rows):
    seen = Counter()
    entries = []
    for r in rows:
        key, motif = r["citation"], r["motif"]
        seen[(key, motif)] += 1
        task = slugify(motif)
        if seen[(key, motif)] > 1:
            task += f"-{seen[(key, motif)]}"
        domains = r["domains"].split(";")
        entries.append({
            "id": f"{slugify(key)}--{task}",
            "citation_key": key,
            "title": TITLES.get(key, key),
            "description": f"{motif} task in {', '.join(domains)}.",
            "domains": domains,
            "motif": motif,
            "compute_bound_tags": [],
            "rating": {"overrides": overrides_for(r["average"]), "provenance": "aggregate-only"},
            "date_added": DATE_ADDED,
            "schema_version": 1,
        })
    return {
        "manifest": {
            "schema_version": 1,
            "entry_count": len(entries),
            "generated_at": f"{DATE_ADDED}T00:00:00Z",
            "source": "published rating table (per-category scores reconstructed from averages)",
        },
        "entries": entries,
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--table", default=ROOT / "data" / "rating_table.csv", type=Path)
    ap.add_argument("--out", default=ROOT / "data" / "seed.ontology.json", type=Path)
    ap.add_argument("--build", default=ROOT / "build", type=Path)
    args = ap.parse_args()

    with open(args.table, newline="") as f:
        doc = build(list(csv.DictReader(f)))
    text = json.dumps(doc, indent=2) + "\n"

    # Canonical ordering and formatting come from the library itself.
    sys.path.insert(0, str(args.build / "python"))
    try:
        import sciontology
        text = sciontology.Registry.parse(text).serialize()
    except ImportError:
        print("warning: sciontology module not built; writing non-canonical output", file=sys.stderr)
    args.out.write_text(text)
    print(f"wrote {len(doc['entries'])} entries to {args.out}")


if __name__ == "__main__":
    main()
