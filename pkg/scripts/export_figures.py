"""Write the data series behind the four reference plots as CSV."""
import argparse
from pathlib import Path

from metafib import evaluate, parse_spec
from metafib.seqio import export_series


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures", help="output directory")
    ap.add_argument("--mu-horizon", type=int, default=10**6)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    export_series(evaluate(parse_spec("conway"), 1024), "values", out / "conway_1024.csv")
    export_series(evaluate(parse_spec("mu"), args.mu_horizon), "values", out / "mu.csv")
    q = evaluate(parse_spec("q"), 14000)
    export_series(q, "values", out / "q_800.csv", hi=800)
    # neighbourhood of the g=14 start points (12056 maternal, 11585 floor formula)
    export_series(q, "values", out / "q_g14.csv", lo=11000, hi=13000)
    export_series(q, "trend_deviation", out / "q_g14_trend.csv", lo=11000, hi=13000)
    export_series(q, "generation_marks", out / "q_marks.csv")
    for path in sorted(out.glob("*.csv")):
        print(path)


if __name__ == "__main__":
    main()
