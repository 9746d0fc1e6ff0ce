"""Trefoil two-mode table: quadrature against the closed forms.

Runs choices I (modes 0,2) and II (modes 0,5) at several aspect ratios and
prints one row per quantity.  Add --json to dump the full bundles.
"""
import argparse
import json

from knotur.cli import RunConfig, cmd_table, cmd_verify_ur, render_bundle


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gammas", type=float, nargs="+", default=[10.0, 100.0])
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    worst = 0.0
    for gamma in args.gammas:
        for label, modes in (("I", (0, 2)), ("II", (0, 5))):
            cfg = RunConfig(gamma=gamma, modes=modes)
            if args.json:
                print(render_bundle(cmd_verify_ur(cfg), "json"))
                continue
            b = cmd_table(cfg)
            print(f"--- choice {label}, gamma = {gamma:g}")
            for d in b.discrepancies:
                flag = "" if d.passed else "  <-- outside tolerance"
                print(f"{d.field:<9} quad {d.quadrature: .10f}  closed {d.closed: .10f}  "
                      f"|diff| {d.abs_diff:.2e}{flag}")
                worst = max(worst, d.abs_diff / d.tolerance)
            for w in b.warnings:
                print("note:", w)
    if not args.json:
        print(f"\nworst |diff| / tolerance: {worst:.3f}")


if __name__ == "__main__":
    main()
