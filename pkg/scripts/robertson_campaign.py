"""Random superpositions on several knots; report worst Robertson margins.

Exact embedding, true commutator.  Several seeds are run to show the
campaign is reproducible and violation free.
"""
import argparse

from knotur.cli import RunConfig, cmd_random_property, render_summary


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 42])
    args = ap.parse_args()

    total = 0
    for seed in args.seeds:
        s = cmd_random_property(RunConfig(seed=seed), args.trials)
        print(render_summary(s, "text"))
        total += s["violations"]
    print(f"total violations over {len(args.seeds)} seeds: {total}")
    return 1 if total else 0


if __name__ == "__main__":
    raise SystemExit(main())
