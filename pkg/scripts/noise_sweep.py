"""Mean true-positive rate and false positives of the detector as classifier noise grows.

Each seed builds a shuffled multi-sentence passage, injects one error of every
type, synthesizes window predictions with uniform label flips and scores the
detections against the injected errors.
"""

import argparse
import json
from statistics import mean

from aslgram.evaluate import match_errors
from aslgram.pipeline import detect
from aslgram.simulate import INJECTION_ORDER, NoiseModel, build_passage, derive_frame_truth, inject_all, synthesize_predictions
from aslgram.windows import DEFAULT_SPECS


def sweep(flips, seeds):
    rows = []
    for p in flips:
        rates, fps = [], []
        for seed in range(seeds):
            tl = inject_all(build_passage(seed=seed), INJECTION_ORDER, seed)
            records = synthesize_predictions(derive_frame_truth(tl), DEFAULT_SPECS, NoiseModel.uniform(p, seed))
            report = match_errors(detect(records, tl.meta), tl.spans("errors"), tl.meta)
            rates.append(report.total.tp_rate)
            fps.append(report.false_positives)
        rows.append({"flip": p, "mean_tp_rate": mean(rates), "min_tp_rate": min(rates), "mean_false_positives": mean(fps)})
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--flips", type=float, nargs="+", default=[0.0, 0.1, 0.2, 0.3, 0.4])
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--json", action="store_true", help="print JSON instead of a table")
    args = ap.parse_args()
    rows = sweep(args.flips, args.seeds)
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'flip':>5} {'mean TP':>8} {'min TP':>7} {'mean FP':>8}")
        for r in rows:
            print(f"{r['flip']:>5.2f} {r['mean_tp_rate']:>8.4f} {r['min_tp_rate']:>7.3f} {r['mean_false_positives']:>8.2f}")
