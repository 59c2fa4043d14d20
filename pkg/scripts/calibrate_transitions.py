"""Grid-search the transition detector against known transition indices."""
import argparse
import json

from metafib import evaluate, parse_spec
from metafib.qanalysis import DEFAULT_PARAMS, calibrate, detect_transitions, params_dict, transition_hits

KNOWN = [3032, 6042, 12069, 24064, 48013, 95182, 189266]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=200_000)
    ap.add_argument("--tol", type=float, default=0.01, help="relative tolerance")
    args = ap.parse_args()

    table = evaluate(parse_spec("q"), args.n)
    targets = [t for t in KNOWN if t * (1 + args.tol) < args.n]
    found = detect_transitions(table, DEFAULT_PARAMS)
    print("defaults:", json.dumps(params_dict(DEFAULT_PARAMS)))
    print("  detections:", found)
    print("  hits:", transition_hits(found, targets, args.tol))
    params, hits, n_found = calibrate(table, targets, args.tol)
    print("best grid point:", json.dumps(params_dict(params)), f"({n_found} detections)")
    print("  hits:", hits)


if __name__ == "__main__":
    main()
