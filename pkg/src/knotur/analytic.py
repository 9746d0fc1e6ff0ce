"""Closed forms for the equal-weight two-mode state on a thin torus knot.

Each moment is held as a polynomial in 1/gamma whose coefficients come
from exact Kronecker deltas on |k - n| against p and p + q.  That makes
it straightforward to put them next to the exact series in
:mod:`knotur.series` and see where they disagree.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import DuplicateMode, NotCoprime, UnsupportedChoice, ZeroMRL
from .geometry import KnotSpec, TorusSpec
from .quantum import (Commutator, Relation, Source, URReport, make_ur_report)
from . import series as ser

SQRT2 = math.sqrt(2.0)


def kron(lhs, rhs) -> int:
    """1 if two rationals are equal, else 0.  Floats are refused."""
    if isinstance(lhs, float) or isinstance(rhs, float):
        raise TypeError("kron works on exact integers or Fractions only")
    return int(Fraction(lhs) == Fraction(rhs))


class ChoiceClass(str, enum.Enum):
    CHOICE_I = "I"
    CHOICE_II = "II"
    ZERO_MEAN = "zero-mean"


@dataclass(frozen=True)
class TwoModeState:
    n: int
    k: int
    p: int
    q: int

    def __post_init__(self):
        if self.n == self.k:
            raise DuplicateMode(f"modes must differ, got n = k = {self.n}")
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be positive")
        if math.gcd(self.p, self.q) != 1:
            raise NotCoprime(f"gcd({self.p}, {self.q}) != 1")

    @property
    def gap(self) -> int:
        return abs(self.k - self.n)

    @property
    def alpha(self) -> Fraction:
        return Fraction(-self.q, self.p)


def classify(s: TwoModeState) -> ChoiceClass:
    if kron(s.gap, s.p):
        return ChoiceClass.CHOICE_I
    if kron(s.gap, s.p + s.q):
        return ChoiceClass.CHOICE_II
    return ChoiceClass.ZERO_MEAN


class Closed(NamedTuple):
    poly: dict           # 1/gamma order -> coefficient, at a = 1
    provenance: str


def _first_moments(s: TwoModeState) -> dict[str, Closed]:
    d_p, d_pq = kron(s.gap, s.p), kron(s.gap, s.p + s.q)
    poly = {o: c for o, c in ((0, Fraction(d_p, 2)), (1, Fraction(d_pq, 4))) if c}
    fired = [name for name, hit in (("|k-n|=p", d_p), ("|k-n|=p+q", d_pq)) if hit]
    return {
        "mean_x": Closed(poly, "delta " + " and ".join(fired) if fired else "no delta fired"),
        "mean_y": Closed({}, "identically zero"),
        "mean_z": Closed({}, "identically zero"),
    }


def zy_eight_term(s: TwoModeState) -> Closed:
    """The general <zy> delta expression, each condition checked exactly."""
    a, r = s.alpha, Fraction(s.k - s.n, s.p)
    first = [("alpha=1", kron(a, 1), 1, Fraction(1, 2)),
             ("alpha=1-alpha", kron(a, 1 - a), 2, Fraction(1, 4)),
             ("alpha=1+r", kron(a, 1 + r), 1, Fraction(1, 4)),
             ("alpha=1-r", kron(a, 1 - r), 1, Fraction(1, 4)),
             ("alpha=1+alpha+r", kron(a, 1 + a + r), 2, Fraction(1, 8)),
             ("alpha=1+alpha-r", kron(a, 1 + a - r), 2, Fraction(1, 8)),
             ("alpha=1-alpha+r", kron(a, 1 - a + r), 2, Fraction(1, 8)),
             ("alpha=1-alpha-r", kron(a, 1 - a - r), 2, Fraction(1, 8))]
    poly: dict = {}
    fired = []
    for name, hit, order, coef in first:
        if hit:
            poly[order] = poly.get(order, 0) + coef
            fired.append(name)
    label = "eight-term delta sum, r=(k-n)/p: " + (", ".join(fired) if fired else "none fired")
    return Closed(poly, label)


def _second_moments(s: TwoModeState) -> dict[str, Closed]:
    choice = classify(s)
    if choice is ChoiceClass.CHOICE_I:
        zy = Closed({2: Fraction(1, 8)}, "printed choice I value")
    elif choice is ChoiceClass.CHOICE_II:
        zy = Closed({1: Fraction(1, 4)}, "printed choice II value")
    else:
        zy = zy_eight_term(s)
    return {
        "mean_x2": Closed({0: Fraction(1, 2)}, "choice independent"),
        "mean_y2": Closed({0: Fraction(1, 2), 2: Fraction(1, 4)}, "choice independent"),
        "mean_z2": Closed({2: Fraction(1, 2)}, "choice independent"),
        "mean_zx": Closed({}, "identically zero"),
        "mean_zy": zy,
    }


MOMENT_DEGREE = {"mean_x": 1, "mean_y": 1, "mean_z": 1, "mean_x2": 2, "mean_y2": 2,
                 "mean_z2": 2, "mean_zx": 2, "mean_zy": 2}


def closed_moment_polys(s: TwoModeState) -> dict[str, Closed]:
    return {**_first_moments(s), **_second_moments(s)}


def _value(c: Closed, name: str, t: TorusSpec) -> float:
    return ser.evaluate(c.poly, t.gamma, t.a ** MOMENT_DEGREE[name])


def closed_first_moments(s: TwoModeState, t: TorusSpec) -> tuple[float, float, float]:
    m = _first_moments(s)
    return tuple(_value(m[f], f, t) for f in ("mean_x", "mean_y", "mean_z"))


def closed_second_moments(s: TwoModeState, t: TorusSpec):
    """(<x^2>, <y^2>, <z^2>, <zx>, <zy>)."""
    m = _second_moments(s)
    return tuple(_value(m[f], f, t)
                 for f in ("mean_x2", "mean_y2", "mean_z2", "mean_zx", "mean_zy"))


def closed_sigmas(s: TwoModeState, t: TorusSpec, hbar: float = 1.0):
    """(sigma_x, sigma_y, sigma_z, sigma_Lz)."""
    a, eps = t.a, t.inv_gamma
    sigma_lz = hbar * s.gap / (2 * s.p)
    sigma_z = a * eps / SQRT2
    choice = classify(s)
    if choice is ChoiceClass.CHOICE_I:
        return a / 2, a / SQRT2, sigma_z, sigma_lz
    if choice is ChoiceClass.CHOICE_II:
        return a / SQRT2, a / SQRT2, sigma_z, sigma_lz
    return a / SQRT2, a * math.sqrt(0.5 + 0.25 * eps * eps), sigma_z, sigma_lz


def closed_lz(s: TwoModeState, hbar: float = 1.0) -> tuple[float, float]:
    """(<Lz>, <Lz^2>)."""
    return (hbar * (s.n + s.k) / (2 * s.p),
            hbar ** 2 * (s.n ** 2 + s.k ** 2) / (2 * s.p ** 2))


def _require_choice(s: TwoModeState) -> ChoiceClass:
    choice = classify(s)
    if choice is ChoiceClass.ZERO_MEAN:
        raise UnsupportedChoice(f"|k-n|={s.gap} is neither p nor p+q")
    return choice


def closed_ur_bounds(s: TwoModeState, t: TorusSpec, hbar: float = 1.0) -> dict[str, URReport]:
    """The three relations with the right-hand sides as printed.

    The printed z right-hand side is negative; ``rhs`` holds its modulus
    and ``margin_signed`` the literal lhs - printed rhs.
    """
    choice = _require_choice(s)
    a, eps = t.a, t.inv_gamma
    qp = s.q / s.p
    sx, sy, sz, slz = closed_sigmas(s, t, hbar)
    if choice is ChoiceClass.CHOICE_I:
        rhs_y = a * hbar / 4 * (1 + qp * eps * eps / 4)
    else:
        rhs_y = a * hbar * eps / 8 * (1 + qp)
    rhs_z = -3 * a * hbar * qp * eps / 8
    floor = hbar * a
    mk = lambda rel, lhs, rhs: make_ur_report(rel, lhs, rhs, Source.CLOSED_FORM, floor,
                                              Commutator.THIN_CLOSED_FORM)
    return {"x": mk(Relation.X_LZ, sx * slz, 0.0),
            "y": mk(Relation.Y_LZ, sy * slz, rhs_y),
            "z": mk(Relation.Z_LZ, sz * slz, rhs_z)}


class ClosedCombined(NamedTuple):
    R: float
    lhs: float
    rhs: float            # printed bound
    rhs_assembled: float  # root-sum-of-squares of the three closed relations


def closed_mrl_and_combined(s: TwoModeState, t: TorusSpec, hbar: float = 1.0,
                            weight: float = 1.0) -> ClosedCombined:
    choice = _require_choice(s)
    mx, my, mz = closed_first_moments(s, t)
    R = math.sqrt(mx * mx + my * my + weight * mz * mz)
    if R == 0.0:
        raise ZeroMRL("closed mean resultant length vanishes")
    sx, sy, sz, slz = closed_sigmas(s, t, hbar)
    lhs = math.sqrt(sx * sx + sy * sy + weight * sz * sz) / R * slz
    qp = s.q / s.p
    printed = hbar / 2 if choice is ChoiceClass.CHOICE_I else hbar / 2 * (1 + qp + (3 * qp) ** 2)
    urs = closed_ur_bounds(s, t, hbar)
    assembled = math.sqrt(urs["x"].rhs ** 2 + urs["y"].rhs ** 2 + weight * urs["z"].rhs ** 2) / R
    return ClosedCombined(R, lhs, printed, assembled)


def closed_combined_report(s, t, hbar=1.0, weight=1.0) -> URReport:
    c = closed_mrl_and_combined(s, t, hbar, weight)
    return make_ur_report(Relation.COMBINED, c.lhs, c.rhs, Source.CLOSED_FORM, hbar,
                          Commutator.THIN_CLOSED_FORM, weight=weight)


@dataclass(frozen=True)
class ClosedFormReport:
    mean_x: float
    mean_y: float
    mean_z: float
    mean_x2: float
    mean_y2: float
    mean_z2: float
    mean_zx: float
    mean_zy: float
    mean_Lz: float
    mean_Lz2: float
    sigma_x: float
    sigma_y: float
    sigma_z: float
    sigma_Lz: float
    choice: ChoiceClass
    ur: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def values(self) -> dict:
        return {f: getattr(self, f) for f in
                ("mean_x", "mean_y", "mean_z", "mean_x2", "mean_y2", "mean_z2",
                 "mean_zx", "mean_zy", "mean_Lz", "mean_Lz2",
                 "sigma_x", "sigma_y", "sigma_z", "sigma_Lz")}

    def to_dict(self) -> dict:
        return {**self.values(), "choice": self.choice.value,
                "ur": {k: v.to_dict() for k, v in self.ur.items()},
                "provenance": dict(self.provenance)}


def closed_form_report(s: TwoModeState, t: TorusSpec, hbar: float = 1.0) -> ClosedFormReport:
    polys = closed_moment_polys(s)
    vals = {name: _value(c, name, t) for name, c in polys.items()}
    prov = {name: c.provenance for name, c in polys.items()}
    sx, sy, sz, slz = closed_sigmas(s, t, hbar)
    lz, lz2 = closed_lz(s, hbar)
    choice = classify(s)
    for f in ("sigma_x", "sigma_y", "sigma_z"):
        prov[f] = f"choice {choice.value} row"
    prov.update(mean_Lz="mode algebra (n+k)hbar/2p", mean_Lz2="mode algebra (n^2+k^2)hbar^2/2p^2",
                sigma_Lz="mode algebra |n-k|hbar/2p")
    ur = {} if choice is ChoiceClass.ZERO_MEAN else closed_ur_bounds(s, t, hbar)
    return ClosedFormReport(**vals, mean_Lz=lz, mean_Lz2=lz2, sigma_x=sx, sigma_y=sy,
                            sigma_z=sz, sigma_Lz=slz, choice=choice, ur=ur, provenance=prov)


class Mismatch(NamedTuple):
    field: str
    order: int
    exact: Fraction
    closed: Fraction


def resonance_mismatches(s: TwoModeState, max_order: int | None = None) -> list[Mismatch]:
    """Orders of 1/gamma at which the closed moments differ from the exact
    thin-torus series (resonances the delta bookkeeping missed or invented)."""
    knot = KnotSpec(s.p, s.q)
    out = []
    exprs = {"mean_x": "x", "mean_y": "y", "mean_z": "z", "mean_x2": "xx", "mean_y2": "yy",
             "mean_z2": "zz", "mean_zx": "zx", "mean_zy": "zy"}
    for name, c in closed_moment_polys(s).items():
        exact = ser.two_mode_expectation(ser.thin_monomial(knot, exprs[name]), s.n, s.k, s.p)
        for o in sorted(set(exact) | set(c.poly)):
            if max_order is not None and o > max_order:
                continue
            e, cl = exact.get(o, Fraction(0)), Fraction(c.poly.get(o, 0))
            if e != cl:
                out.append(Mismatch(name, o, e, cl))
    return out


@dataclass(frozen=True)
class CircleSpec:
    A: float
    n: int
    k: int

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError("radius must be positive")
        if self.n == self.k:
            raise DuplicateMode("modes must differ")


@dataclass(frozen=True)
class CircleResult:
    mean_X: float
    mean_Y: float
    mean_Lz: float
    sigma_X: float
    sigma_Y: float
    sigma_Lz: float
    ur_X: tuple[float, float]  # (sigma_X sigma_Lz, hbar/2 |<Y>|)
    ur_Y: tuple[float, float]  # (sigma_Y sigma_Lz, hbar/2 |<X>|)


def circle_baseline(c: CircleSpec, hbar: float = 1.0) -> CircleResult:
    gap = abs(c.k - c.n)
    mean_x = c.A / 2 * kron(gap, 1)
    mean_y = 0.0
    # second moments pick up the cos(2 phi) resonance when |n-k| = 2
    x2 = c.A ** 2 / 2 + c.A ** 2 / 4 * kron(gap, 2)
    y2 = c.A ** 2 / 2 - c.A ** 2 / 4 * kron(gap, 2)
    sx = math.sqrt(max(x2 - mean_x ** 2, 0.0))
    sy = math.sqrt(y2)
    slz = hbar * gap / 2
    return CircleResult(mean_X=mean_x, mean_Y=mean_y, mean_Lz=hbar * (c.n + c.k) / 2,
                        sigma_X=sx, sigma_Y=sy, sigma_Lz=slz,
                        ur_X=(sx * slz, hbar / 2 * abs(mean_y)),
                        ur_Y=(sy * slz, hbar / 2 * abs(mean_x)))
