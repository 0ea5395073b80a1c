#!/usr/bin/env python3
"""Generate the 9-workload clustering fixture under tests/data/synthetic/.

Three low-power, three high-power and three mixed workloads (the mixed group
draws from a mid-range band shared by neither of the others). Output is
deterministic for a given --seed.
"""
import argparse
import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "tests" / "data" / "synthetic"

GROUPS = {
    # name: (band lo W, band hi W, motif, domain)
    "low": (25.0, 95.0, "Classification", "High Energy Physics"),
    "high": (250.0, 315.0, "Generative", "Materials Science"),
    "mixed": (120.0, 230.0, "Regression", "Climate & Earth Science"),
}
SAMPLES = 600
PERIOD_MS = 100
CATS = {
    "software": ["code_available", "code_complete", "code_documented", "runs_unmodified",
                 "environment_provided"],
    "specification": ["constraints_provided", "task_clear", "dataset_format_specified",
                      "inputs_specified", "outputs_specified"],
    "dataset": ["fair_findable", "fair_accessible", "fair_interoperable", "fair_reusable",
                "has_splits"],
    "reference": ["solution_available", "solution_documented", "requirements_listed",
                  "metrics_evaluated", "baseline_open"],
    "documentation": ["task_documented", "background_explained", "motivation_explained",
                      "evaluation_explained", "paper_exists"],
}


def trace(rng, lo, hi):
    # Random walk reflected inside [lo, hi] so each trace has its own shape.
    p = rng.uniform(lo, hi)
    rows = ["timestamp_ms,power_w"]
    for i in range(SAMPLES):
        p += rng.gauss(0.0, (hi - lo) * 0.08)
        while p < lo or p > hi:
            p = 2 * lo - p if p < lo else 2 * hi - p
        rows.append(f"{i * PERIOD_MS},{p:.2f}")
    return "\n".join(rows) + "\n"


def card(rng):
    out = {c: {k: rng.random() < 0.7 for k in keys} for c, keys in CATS.items()}
    out["metrics"] = {"definitions_level": rng.randint(0, 3), "quality_level": rng.randint(0, 2)}
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=20250901)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    traces = OUT / "traces"
    traces.mkdir(parents=True, exist_ok=True)
    entries, membership = [], {}
    for group, (lo, hi, motif, domain) in GROUPS.items():
        for k in range(1, 4):
            key = f"synthetic-{group}-{k}"
            eid = f"{key}--{motif.lower()}"
            (traces / f"{eid}.csv").write_text(trace(rng, lo, hi))
            membership[eid] = group
            entries.append({
                "id": eid,
                "citation_key": key,
                "title": f"Synthetic {group} power workload {k}",
                "description": f"Synthetic workload drawing {lo:.0f}-{hi:.0f} W.",
                "domains": [domain],
                "motif": motif,
                "compute_bound_tags": [],
                "rating": card(rng),
                "date_added": "2025-09-01",
                "schema_version": 1,
            })
    corpus = {
        "manifest": {"schema_version": 1, "entry_count": len(entries),
                     "generated_at": "2025-09-01T00:00:00Z",
                     "source": f"synthetic fixture, seed {args.seed}"},
        "entries": entries,
    }
    (OUT / "corpus.ontology.json").write_text(json.dumps(corpus, indent=2) + "\n")
    (OUT / "membership.json").write_text(json.dumps(membership, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(entries)} traces to {traces}")


if __name__ == "__main__":
    main()
