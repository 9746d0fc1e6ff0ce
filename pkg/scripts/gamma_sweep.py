"""Aspect ratio sweep: embedding error, Robertson margins and table gaps.

Writes CSV (stdout or --out) and prints the observed order of the
thin-vs-exact embedding error between successive gammas.
"""
import argparse
import math

from knotur.cli import RunConfig, cmd_sweep_gamma, render_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--modes", default="0,2")
    ap.add_argument("--gammas", type=float, nargs="+", default=[5, 10, 20, 40, 80, 160])
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    cfg = RunConfig(p=args.p, q=args.q, modes=tuple(int(m) for m in args.modes.split(",")))
    rows = cmd_sweep_gamma(cfg, args.gammas)
    text = render_rows(rows, "csv")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")

    for r0, r1 in zip(rows, rows[1:]):
        order = math.log(r0["embed_sup_error"] / r1["embed_sup_error"]) / math.log(r1["gamma"] / r0["gamma"])
        print(f"# order {r0['gamma']:g} -> {r1['gamma']:g}: {order:.3f}")


if __name__ == "__main__":
    main()
