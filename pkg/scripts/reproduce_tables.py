"""Print the four reference tables computed from scratch.

    python3 scripts/reproduce_tables.py [--q-horizon N]
"""
import argparse

from metafib import evaluate, parse_spec
from metafib.genseq import maternal
from metafib.qanalysis import build_comparison, deviation, format_percent, maternal_partition, pinn_start


def conway_generations():
    _, _, part = maternal(evaluate(parse_spec("conway"), 1024))
    print("Conway maternal generations, n <= 1024")
    for rec in part.records:
        print(f"  g={rec.g:2d}  [{rec.alpha}, {rec.beta}]")


def mu_values():
    vals = evaluate(parse_spec("mu"), 50).values.tolist()
    print("mu(n), n = 1..50")
    for row in range(0, 50, 10):
        print("  " + " ".join(f"{v:3d}" for v in vals[row:row + 10]))


def q_tables(horizon):
    table = evaluate(parse_spec("q"), horizon)
    print(f"Q start points, maternal vs floor(2^(g-1/2)), horizon {horizon}")
    print(build_comparison(table, 20).render())
    part = maternal_partition(table)
    print("Q deviations |Q(n)-Q(n-1)|/Q(n-1) in percent")
    for g in range(12, 19):
        a, p = part.alpha(g), pinn_start(g)
        print(f"  g={g}  {a:7d} {format_percent(deviation(table, a)):>6}  "
              f"{p:7d} {format_percent(deviation(table, p)):>6}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q-horizon", type=int, default=10**6)
    args = ap.parse_args()
    conway_generations()
    print()
    mu_values()
    print()
    q_tables(args.q_horizon)


if __name__ == "__main__":
    main()
