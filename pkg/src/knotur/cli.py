"""knotur command line.

Usage:
    knotur table          [--p 2 --q 3 --gamma 10 --modes 0,2 ...]
    knotur verify-ur      [...]
    knotur sweep-gamma    --gammas 10,20,40 [...]
    knotur random-property --trials 200 --seed 42 [...]

Exit codes: 0 all checks pass, 1 a verified inequality (or a table
comparison) failed, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .analytic import (ChoiceClass, TwoModeState, classify, closed_combined_report,
                       closed_form_report, closed_mrl_and_combined, resonance_mismatches)
from .errors import KnotURError, ZeroMRL
from .geometry import (KnotSpec, ParameterizationKind, new_knot, new_torus_from_scale,
                       thin_exact_sup_error)
from .quantum import (UR_SLACK, Commutator, ExpectationReport, QuadratureConfig, Source,
                      URReport, WeightPreset, combined_ur, equal_superposition,
                      make_superposition, robertson_pair, standard_deviations)

RANDOM_KNOTS = ((2, 3), (3, 4), (2, 5), (3, 5))
RANDOM_GAMMAS = (5.0, 10.0, 50.0)
SWEEP_HEADER = ["gamma", "embed_sup_error",
                "margin_x_thin", "margin_y_thin", "margin_z_thin",
                "margin_x_exact", "margin_y_exact", "margin_z_exact",
                "max_discrepancy"]


@dataclass(frozen=True)
class RunConfig:
    p: int = 2
    q: int = 3
    gamma: float = 10.0
    a: float = 1.0
    hbar: float = 1.0
    modes: tuple = (0, 2)
    kind: ParameterizationKind = ParameterizationKind.THIN
    weight_preset: WeightPreset = WeightPreset.INVERSE_GAMMA
    seed: int = 0
    output_format: str = "text"

    def inputs(self) -> dict:
        return {"p": self.p, "q": self.q, "gamma": self.gamma, "a": self.a,
                "hbar": self.hbar, "modes": list(self.modes),
                "kind": ParameterizationKind(self.kind).value,
                "weight_preset": WeightPreset(self.weight_preset).value,
                "weight": self.weight, "seed": self.seed}

    @property
    def weight(self) -> float:
        return WeightPreset(self.weight_preset).value_at(self.gamma)


@dataclass
class Discrepancy:
    field: str
    closed: float
    quadrature: float
    abs_diff: float
    tolerance: float
    passed: bool


@dataclass
class VerificationBundle:
    inputs: dict
    expectations: ExpectationReport
    closed: object = None
    urs: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)
    mrl: dict | None = None
    combined: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    resonances: list = field(default_factory=list)
    verify: bool = False

    def exit_code(self) -> int:
        if self.verify:
            gating = [u for u in self.urs + self.combined if _gating(u)]
            bad = any(not u.satisfied for u in gating)
            bad = bad or (self.mrl is not None and not self.mrl["satisfied"])
        else:
            bad = any(not d.passed for d in self.discrepancies)
        return 1 if bad else 0

    def to_dict(self) -> dict:
        exp = self.expectations.to_dict()
        sig_keys = [k for k in exp if k.startswith("sigma_")]
        closed = self.closed.to_dict() if self.closed is not None else None
        return {
            "inputs": self.inputs,
            "expectations": {k: v for k, v in exp.items() if not k.startswith("sigma_")},
            "closed_forms": closed,
            "sigmas": {"quadrature": {k: exp[k] for k in sig_keys},
                       "closed": ({k: closed[k] for k in sig_keys} if closed else None)},
            "uncertainty_relations": [_ur_dict(u) for u in self.urs],
            "mrl": self.mrl,
            "combined": [_ur_dict(u) for u in self.combined],
            "discrepancies": [vars(d).copy() for d in self.discrepancies],
            "resonances": self.resonances,
            "warnings": self.warnings,
            "exit_code": self.exit_code(),
        }


def _gating(u: URReport) -> bool:
    return u.source is Source.QUADRATURE and u.commutator is Commutator.TANGENT


def _ur_dict(u: URReport) -> dict:
    d = u.to_dict()
    d["gating"] = _gating(u)
    return d


def _setup(cfg: RunConfig):
    knot = new_knot(cfg.p, cfg.q)
    torus = new_torus_from_scale(cfg.a, cfg.gamma)
    if not cfg.hbar > 0:
        raise ValueError("hbar must be positive")
    if len(cfg.modes) < 1:
        raise ValueError("at least one mode is required")
    psi = equal_superposition(cfg.p, cfg.modes, cfg.hbar)
    state = None
    if len(cfg.modes) == 2:
        state = TwoModeState(cfg.modes[0], cfg.modes[1], cfg.p, cfg.q)
    return torus, knot, psi, state


def _tolerance(name: str, cfg: RunConfig) -> float:
    if name in ("mean_Lz", "mean_Lz2", "sigma_Lz"):
        return 1e-12 * max(1.0, cfg.hbar ** 2)
    degree = 1 if name in ("mean_x", "mean_y", "mean_z", "sigma_x", "sigma_y", "sigma_z") else 2
    return 5 * cfg.a ** degree / cfg.gamma ** 2


def _discrepancies(quad: ExpectationReport, closed, cfg: RunConfig) -> list[Discrepancy]:
    out = []
    for name, cv in closed.values().items():
        qv = getattr(quad, name)
        diff = abs(qv - cv)
        tol = _tolerance(name, cfg)
        out.append(Discrepancy(name, cv, qv, diff, tol, diff <= tol))
    return out


def cmd_table(cfg: RunConfig) -> VerificationBundle:
    torus, knot, psi, state = _setup(cfg)
    quad = standard_deviations(psi, torus, knot, cfg.kind)
    bundle = VerificationBundle(inputs=cfg.inputs(), expectations=quad)
    if state is not None:
        bundle.closed = closed_form_report(state, torus, cfg.hbar)
        bundle.discrepancies = _discrepancies(quad, bundle.closed, cfg)
        mism = resonance_mismatches(state)
        bundle.resonances = [{"field": m.field, "order": m.order, "exact": str(m.exact),
                              "closed": str(m.closed)} for m in mism]
        for m in mism:
            if m.order <= 1:
                bundle.warnings.append(
                    f"{m.field}: exact thin value has 1/gamma^{m.order} coefficient {m.exact}, "
                    f"closed form has {m.closed} (resonance not in the closed form)")
    else:
        bundle.warnings.append("closed forms cover two-mode states only; comparison skipped")
    return bundle


def cmd_verify_ur(cfg: RunConfig) -> VerificationBundle:
    bundle = cmd_table(cfg)
    bundle.verify = True
    torus, knot, psi, state = _setup(cfg)
    quad = bundle.expectations
    thin = ParameterizationKind(cfg.kind) is ParameterizationKind.THIN
    for coord in "xyz":
        bundle.urs.append(robertson_pair(psi, torus, knot, coord, cfg.kind, report=quad))
    if thin:
        for coord in "xyz":
            u = robertson_pair(psi, torus, knot, coord, cfg.kind, report=quad,
                               commutator=Commutator.THIN_CLOSED_FORM)
            bundle.urs.append(u)
            if not u.satisfied:
                bundle.warnings.append(
                    f"{u.name} with the approximate thin-torus commutator fails once the "
                    f"right-hand side is taken in modulus (lhs {u.lhs:.6g} < |rhs| {u.rhs:.6g}); "
                    f"as printed (signed) its margin is {u.margin_signed:.6g}")
    choice = classify(state) if state is not None else None
    if choice in (ChoiceClass.CHOICE_I, ChoiceClass.CHOICE_II):
        bundle.urs.extend(bundle.closed.ur.values())
        bundle.warnings.append("printed z right-hand side denominator 's' read as 8")

    w = cfg.weight
    R = math.sqrt(quad.mean_x ** 2 + quad.mean_y ** 2 + w * quad.mean_z ** 2)
    bound = cfg.a * math.sqrt(1 + 2 / cfg.gamma)
    bundle.mrl = {"weight_preset": WeightPreset(cfg.weight_preset).value, "weight": w,
                  "R": R, "bound": bound, "satisfied": R <= bound,
                  "R_closed": None, "combined_rhs_assembled_closed": None}
    try:
        bundle.combined.append(combined_ur(psi, torus, knot, cfg.kind, weight=w, report=quad))
        if thin:
            bundle.combined.append(combined_ur(psi, torus, knot, cfg.kind, weight=w, report=quad,
                                               commutator=Commutator.THIN_CLOSED_FORM))
    except ZeroMRL:
        bundle.warnings.append("mean resultant length is zero; combined relation undefined")
    if choice in (ChoiceClass.CHOICE_I, ChoiceClass.CHOICE_II):
        cc = closed_mrl_and_combined(state, torus, cfg.hbar, w)
        bundle.mrl["R_closed"] = cc.R
        bundle.mrl["combined_rhs_assembled_closed"] = cc.rhs_assembled
        bundle.combined.append(closed_combined_report(state, torus, cfg.hbar, w))
    return bundle


def _margins(psi, torus, knot, kind) -> list[float]:
    rep = standard_deviations(psi, torus, knot, kind)
    return [robertson_pair(psi, torus, knot, c, kind, report=rep).margin for c in "xyz"]


def cmd_sweep_gamma(cfg: RunConfig, gammas) -> list[dict]:
    gammas = [float(g) for g in gammas]
    if any(not g > 1 for g in gammas):
        raise ValueError("every gamma must exceed 1")
    rows = []
    for g in gammas:
        c = RunConfig(**{**vars(cfg), "gamma": g})
        torus, knot, psi, state = _setup(c)
        row = {"gamma": g, "embed_sup_error": thin_exact_sup_error(torus, knot)}
        for kind in (ParameterizationKind.THIN, ParameterizationKind.EXACT):
            for coord, m in zip("xyz", _margins(psi, torus, knot, kind)):
                row[f"margin_{coord}_{kind.value}"] = m
        if state is not None:
            quad = standard_deviations(psi, torus, knot, ParameterizationKind.THIN)
            d = _discrepancies(quad, closed_form_report(state, torus, c.hbar), c)
            row["max_discrepancy"] = max(x.abs_diff for x in d)
        else:
            row["max_discrepancy"] = None
        rows.append(row)
    return rows


def cmd_random_property(cfg: RunConfig, trials: int) -> dict:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(cfg.seed)
    floor = UR_SLACK * cfg.hbar * cfg.a
    names = ("X_Lz", "Y_Lz", "Z_Lz")
    min_margin = {n: math.inf for n in names}
    worst = {n: None for n in names}
    violations = []
    for i in range(trials):
        p, q = RANDOM_KNOTS[rng.integers(len(RANDOM_KNOTS))]
        gamma = RANDOM_GAMMAS[rng.integers(len(RANDOM_GAMMAS))]
        n_modes = int(rng.integers(2, 6))
        ns = rng.choice(np.arange(-12, 13), size=n_modes, replace=False)
        amps = rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)
        psi = make_superposition(p, zip(ns.tolist(), amps.tolist()), cfg.hbar)
        torus, knot = new_torus_from_scale(cfg.a, gamma), KnotSpec(p, q)
        rep = standard_deviations(psi, torus, knot, ParameterizationKind.EXACT)
        for coord, name in zip("xyz", names):
            u = robertson_pair(psi, torus, knot, coord, ParameterizationKind.EXACT, report=rep)
            if u.margin < min_margin[name]:
                min_margin[name] = u.margin
                worst[name] = {"trial": i, "p": p, "q": q, "gamma": gamma,
                               "modes": ns.tolist()}
            if u.margin < -floor:
                violations.append({"trial": i, "relation": name, "margin": u.margin})
    return {"trials": trials, "seed": cfg.seed, "kind": "exact",
            "threshold": -floor, "violations": len(violations),
            "violation_list": violations, "min_margin": min_margin, "worst_case": worst,
            "exit_code": 1 if violations else 0}


# rendering

def _fmt(v) -> str:
    if isinstance(v, bool) or v is None:
        return str(v).lower() if v is not None else ""
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _clean(obj):
    """Plain python scalars only; refuse non-finite floats."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite value {obj} in output")
        return float(obj)
    if hasattr(obj, "value"):
        return obj.value
    return obj


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def render_bundle(bundle: VerificationBundle, fmt: str) -> str:
    d = _clean(bundle.to_dict())
    if fmt == "json":
        return json.dumps(d, indent=2, allow_nan=False) + "\n"
    if fmt == "csv":
        return _csv(_flatten(d), ["field", "value"])
    lines = [f"inputs: " + ", ".join(f"{k}={_fmt(v)}" for k, v in d["inputs"].items())]
    closed = d["closed_forms"] or {}
    if closed:
        lines.append(f"choice: {closed['choice']}")
    lines.append(f"{'quantity':<10} {'quadrature':>20} {'closed':>20} {'|diff|':>12} {'tol':>12}  ok")
    disc = {x["field"]: x for x in d["discrepancies"]}
    merged = {**d["expectations"], **d["sigmas"]["quadrature"]}
    for name, qv in merged.items():
        if name == "kind":
            continue
        x = disc.get(name)
        if x:
            lines.append(f"{name:<10} {_fmt(qv):>20} {_fmt(x['closed']):>20} "
                         f"{x['abs_diff']:>12.3e} {x['tolerance']:>12.3e}  {'pass' if x['passed'] else 'FAIL'}")
        else:
            lines.append(f"{name:<10} {_fmt(qv):>20}")
    if d["uncertainty_relations"] or d["combined"]:
        lines.append("")
        lines.append(f"{'relation':<9} {'source':<12} {'commutator':<17} {'lhs':>16} {'rhs':>16} "
                     f"{'margin':>16} {'signed margin':>16}  ok")
        for u in d["uncertainty_relations"] + d["combined"]:
            flag = "yes" if u["satisfied"] else "NO"
            lines.append(f"{u['name']:<9} {u['source']:<12} {u['commutator']:<17} "
                         f"{_fmt(u['lhs']):>16} {_fmt(u['rhs']):>16} {_fmt(u['margin']):>16} "
                         f"{_fmt(u['margin_signed']):>16}  {flag}{'' if u['gating'] else ' (info)'}")
    if d["mrl"]:
        m = d["mrl"]
        lines.append("")
        lines.append(f"MRL ({m['weight_preset']}): R={_fmt(m['R'])} closed={_fmt(m['R_closed'])} "
                     f"bound={_fmt(m['bound'])} {'ok' if m['satisfied'] else 'VIOLATED'}")
    for w in d["warnings"]:
        lines.append(f"warning: {w}")
    lines.append(f"exit code: {d['exit_code']}")
    return "\n".join(lines) + "\n"


def render_rows(rows: list[dict], fmt: str) -> str:
    rows = _clean(rows)
    if fmt == "json":
        return json.dumps(rows, indent=2, allow_nan=False) + "\n"
    if fmt == "csv":
        return _csv(([r[h] for h in SWEEP_HEADER] for r in rows), SWEEP_HEADER)
    lines = ["  ".join(f"{h:>16}" for h in SWEEP_HEADER)]
    for r in rows:
        lines.append("  ".join(f"{_fmt(r[h]):>16}" for h in SWEEP_HEADER))
    return "\n".join(lines) + "\n"


def render_summary(summary: dict, fmt: str) -> str:
    s = _clean(summary)
    if fmt == "json":
        return json.dumps(s, indent=2, allow_nan=False) + "\n"
    if fmt == "csv":
        return _csv(_flatten(s), ["field", "value"])
    lines = [f"trials={s['trials']} seed={s['seed']} kind={s['kind']} threshold={_fmt(s['threshold'])}",
             f"violations: {s['violations']}"]
    for name, m in s["min_margin"].items():
        lines.append(f"min margin {name}: {_fmt(m)}  at {s['worst_case'][name]}")
    return "\n".join(lines) + "\n"


# argument parsing

def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2)
    common.add_argument("--q", type=int, default=3)
    common.add_argument("--gamma", type=float, default=10.0)
    common.add_argument("--a", type=float, default=1.0)
    common.add_argument("--hbar", type=float, default=1.0)
    common.add_argument("--modes", type=_int_list, default=(0, 2),
                        help="comma list of mode integers (equal amplitudes)")
    common.add_argument("--kind", choices=["exact", "thin"], default="thin")
    common.add_argument("--weight", choices=["mrl-gamma", "inverse-gamma"], default="inverse-gamma")
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="knotur", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("table", parents=[common], help="expectation values and SDs vs closed forms")
    sub.add_parser("verify-ur", parents=[common], help="check all uncertainty relations")
    sw = sub.add_parser("sweep-gamma", parents=[common], help="one CSV row per gamma")
    sw.add_argument("--gammas", type=_float_list, default=(10.0, 20.0, 40.0))
    rp = sub.add_parser("random-property", parents=[common], help="random Robertson campaign")
    rp.add_argument("--trials", type=int, default=200)
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(p=args.p, q=args.q, gamma=args.gamma, a=args.a, hbar=args.hbar,
                     modes=tuple(args.modes), kind=ParameterizationKind(args.kind),
                     weight_preset=WeightPreset(args.weight), seed=args.seed,
                     output_format=args.format)


def run(argv=None) -> tuple[int, str]:
    """Parse, compute and render; returns (exit code, text)."""
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.command == "table":
            b = cmd_table(cfg)
            return b.exit_code(), render_bundle(b, cfg.output_format)
        if args.command == "verify-ur":
            b = cmd_verify_ur(cfg)
            return b.exit_code(), render_bundle(b, cfg.output_format)
        if args.command == "sweep-gamma":
            return 0, render_rows(cmd_sweep_gamma(cfg, args.gammas), cfg.output_format)
        summary = cmd_random_property(cfg, args.trials)
        return summary["exit_code"], render_summary(summary, cfg.output_format)
    except (KnotURError, ValueError) as exc:
        return 2, f"error: {type(exc).__name__}: {exc}\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)  # argparse exits 2 itself on bad flags
    code, text = run(argv)
    if code == 2:
        sys.stderr.write(text)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
