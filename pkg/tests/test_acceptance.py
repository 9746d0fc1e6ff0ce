"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line."""
import json
import math

import numpy as np
import pytest

from knotur import (CircleSpec, ParameterizationKind as PK, WeightPreset, circle_baseline,
                    equal_superposition, new_knot, new_torus_from_scale, robertson_pair,
                    standard_deviations, thin_exact_sup_error)
from knotur.cli import RunConfig, cmd_random_property, cmd_table, cmd_verify_ur, render_summary
from knotur.quantum import Commutator, Source, bandwidth_bound, parse_expr, rectangle_rule
from knotur.geometry import embed_thin

P, Q, A, HBAR = 2, 3, 1.0, 1.0
GAMMAS = (10.0, 100.0)
CHOICES = {"I": (0, 2), "II": (0, 5)}
R2 = math.sqrt(2)


def _expected_table(choice, g):
    """Table values written out independently of the package."""
    n, k = CHOICES[choice]
    mx = A / 2 if choice == "I" else A / (4 * g)
    x2, y2, z2 = A ** 2 / 2, A ** 2 / 2 + A ** 2 / (4 * g ** 2), A ** 2 / (2 * g ** 2)
    lz = (n + k) * HBAR / (2 * P)
    lz2 = (n ** 2 + k ** 2) * HBAR ** 2 / (2 * P ** 2)
    slz = HBAR / 2 if choice == "I" else HBAR * (P + Q) / (2 * P)
    return {"mean_x": mx, "mean_y": 0.0, "mean_z": 0.0, "mean_x2": x2, "mean_y2": y2,
            "mean_z2": z2, "sigma_x": math.sqrt(x2 - mx ** 2), "sigma_y": math.sqrt(y2),
            "sigma_z": math.sqrt(z2), "mean_Lz": lz, "mean_Lz2": lz2, "sigma_Lz": slz}


def _cfg(choice, g, **kw):
    return RunConfig(p=P, q=Q, gamma=g, a=A, hbar=HBAR, modes=CHOICES[choice], **kw)


def test_1_table_reproduction(criterion):
    checks = {}
    for g in GAMMAS:
        for choice in CHOICES:
            bundle = cmd_table(_cfg(choice, g))
            quad = bundle.expectations
            for name, ev in _expected_table(choice, g).items():
                tol = 1e-12 if "Lz" in name else 5 * A ** 2 / g ** 2
                checks[f"{choice}@{g:g}:{name}"] = abs(getattr(quad, name) - ev) <= tol
            checks[f"{choice}@{g:g}:table-exit"] = bundle.exit_code() == 0
    criterion("1 table reproduction (gamma 10, 100; choices I, II)", checks)


def _ur(bundle, name, source, commutator):
    return next(u for u in bundle.urs
                if u.name == name and u.source is source and u.commutator is commutator)


def test_2_ur_verification(criterion):
    checks = {}
    g = 10.0
    b1 = cmd_verify_ur(_cfg("I", g))
    b2 = cmd_verify_ur(_cfg("II", g))
    uy = _ur(b1, "Y_Lz", Source.QUADRATURE, Commutator.TANGENT)
    checks["I UR_y margin"] = abs(uy.margin - A * HBAR * (1 / (2 * R2) - 0.25)) <= 2e-3
    want_z = A * HBAR / (8 * g) * (2 * R2 + 3 * Q / P)
    for source in (Source.QUADRATURE, Source.CLOSED_FORM):
        uz = _ur(b1, "Z_Lz", source, Commutator.THIN_CLOSED_FORM)
        checks[f"I UR_z margin ({source.value})"] = abs(uz.margin_signed - want_z) <= 2e-3
    for b, choice in ((b1, "I"), (b2, "II")):
        for u in b.urs:
            if u.name == "X_Lz":
                checks[f"{choice} UR_x rhs ({u.source.value}/{u.commutator.value})"] = abs(u.rhs) < 1e-10
        checks[f"{choice} gating URs hold"] = all(
            u.satisfied for u in b.urs
            if u.source is Source.QUADRATURE and u.commutator is Commutator.TANGENT)
        checks[f"{choice} exit 0"] = b.exit_code() == 0
    for choice in CHOICES:
        checks[f"{choice}@100 exit 0"] = cmd_verify_ur(_cfg(choice, 100.0)).exit_code() == 0
    criterion("2 UR verification margins (gamma 10)", checks)


def test_3_robertson_property_suite(criterion):
    s = cmd_random_property(RunConfig(seed=42), 200)
    checks = {"200 trials": s["trials"] == 200, "exact kind": s["kind"] == "exact",
              "threshold": s["threshold"] == pytest.approx(-1e-10 * HBAR * A),
              "zero violations": s["violations"] == 0, "exit 0": s["exit_code"] == 0}
    criterion("3 Robertson property suite (200 seeded states, exact embedding)", checks)


def test_4_circle_reduction(criterion):
    t = new_torus_from_scale(A, 1e6)
    k = new_knot(1, 2)
    checks = {}
    for nk in [(0, 1), (0, 2), (-1, 1), (1, 3), (2, 5)]:
        c = circle_baseline(CircleSpec(A, *nk), HBAR)
        psi = equal_superposition(1, nk, HBAR)
        for kind in PK:
            r = standard_deviations(psi, t, k, kind)
            ux = robertson_pair(psi, t, k, "x", kind, report=r)
            uy = robertson_pair(psi, t, k, "y", kind, report=r)
            tag = f"{nk}/{kind.value}"
            checks[f"{tag} <X>"] = abs(r.mean_x - c.mean_X) <= 1e-5
            checks[f"{tag} <Y>"] = abs(r.mean_y - c.mean_Y) <= 1e-5
            checks[f"{tag} UR_X"] = (abs(ux.lhs - c.ur_X[0]) <= 1e-5 and abs(ux.rhs - c.ur_X[1]) <= 1e-5
                                     and ux.satisfied)
            checks[f"{tag} UR_Y"] = (abs(uy.lhs - c.ur_Y[0]) <= 1e-5 and abs(uy.rhs - c.ur_Y[1]) <= 1e-5
                                     and uy.satisfied)
    criterion("4 circle reduction (p=1, gamma=1e6)", checks)


def test_5_convergence_order(criterion):
    k = new_knot(P, Q)
    errs = {g: thin_exact_sup_error(new_torus_from_scale(A, g), k) for g in (10.0, 20.0, 40.0, 80.0)}
    ratios = {g: errs[g] / errs[2 * g] for g in (10.0, 20.0, 40.0)}
    print("thin-exact sup error ratios:", {f"{g:g}": round(r, 4) for g, r in ratios.items()})
    criterion("5 thin vs exact O(1/gamma^2) convergence",
              {f"ratio {g:g}->{2 * g:g}": 3.5 <= r <= 4.5 for g, r in ratios.items()})


def test_6_quadrature_exactness(criterion):
    k = new_knot(P, Q)
    checks = {}
    for g in GAMMAS:
        t = new_torus_from_scale(A, g)
        for choice, nk in CHOICES.items():
            psi = equal_superposition(P, nk, HBAR)
            n = bandwidth_bound(psi, k)
            ref = standard_deviations(psi, t, k, PK.THIN)
            for expr in ("1", "x", "y", "z", "xx", "yy", "zz", "zx", "zy"):
                axes = parse_expr(expr)
                f = lambda ph: psi.density(ph) * np.prod(
                    [embed_thin(t, k, ph).component(a) for a in axes] or [np.ones_like(ph)], axis=0)
                v1 = rectangle_rule(f, psi.period, n).real
                v2 = rectangle_rule(f, psi.period, 2 * n).real
                tag = f"{choice}@{g:g}:{expr}"
                checks[tag] = abs(v2 - v1) < 1e-12 * max(abs(v1), 1.0)
                if expr != "1":
                    name = "mean_" + (expr[0] + "2" if len(expr) == 2 and expr[0] == expr[1] else expr)
                    checks[tag + " matches adaptive"] = abs(getattr(ref, name) - v1) < 1e-12 * max(abs(v1), 1.0)
    criterion("6 quadrature exact past the bandwidth bound", checks)


def test_7_zy_adjudication(criterion):
    checks = {}
    for g in GAMMAS:
        d = json.loads(json.dumps(cmd_table(_cfg("I", g)).to_dict()))
        measured = d["expectations"]["mean_zy"]
        printed = d["closed_forms"]["mean_zy"]
        print(f"choice I gamma={g:g}: <zy> measured {measured:.3e}, printed a^2/(8 gamma^2) = {printed:.3e}")
        checks[f"I@{g:g} |<zy>| <= a^2/4g^2"] = abs(measured) <= A ** 2 / (4 * g ** 2)
        checks[f"I@{g:g} printed recorded"] = printed == pytest.approx(A ** 2 / (8 * g ** 2), rel=1e-14)
        zy_rows = [r for r in d["resonances"] if r["field"] == "mean_zy"]
        checks[f"I@{g:g} mismatch recorded"] = bool(zy_rows) and zy_rows[0]["exact"] == "0"
        q2 = cmd_table(_cfg("II", g)).expectations.mean_zy
        checks[f"II@{g:g} <zy> = a^2/4g"] = abs(q2 - A ** 2 / (4 * g)) <= 5 * A ** 2 / g ** 2
    criterion("7 <zy> adjudication", checks)


def test_8_mrl_and_combined(criterion):
    checks = {}
    for g in GAMMAS:
        for preset in WeightPreset:
            for choice in CHOICES:
                b = cmd_verify_ur(_cfg(choice, g, weight_preset=preset))
                tag = f"{choice}@{g:g}/{preset.value}"
                want = A / 2 if choice == "I" else A / (4 * g)
                checks[f"{tag} R"] = abs(b.mrl["R"] - want) <= 5 * A ** 2 / g ** 2
                checks[f"{tag} R bound"] = b.mrl["satisfied"] and b.mrl["R"] <= A * math.sqrt(1 + 2 / g)
                gating = [u for u in b.combined
                          if u.source is Source.QUADRATURE and u.commutator is Commutator.TANGENT]
                checks[f"{tag} combined"] = len(gating) == 1 and gating[0].satisfied
                if choice == "I":
                    checks[f"{tag} lhs >= hbar/2"] = gating[0].lhs >= HBAR / 2
    criterion("8 MRL and combined relation (both weight presets)", checks)


def test_9_determinism(criterion):
    cfg = RunConfig(seed=1234, output_format="json")
    outs = [render_summary(cmd_random_property(cfg, 50), "json").encode() for _ in range(2)]
    criterion("9 determinism of the random campaign", {"byte-identical": outs[0] == outs[1]})
