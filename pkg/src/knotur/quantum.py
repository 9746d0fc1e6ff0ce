"""Superpositions of Lz eigenstates on the 2 p pi periodic knot and the
numerical expectation values built on them.

Every integrand here is periodic, and for the thin torus it is a
trigonometric polynomial, so the equispaced rectangle rule over one full
period is exact once the grid resolves the highest frequency.  Lz is
applied analytically on modes; nothing differentiates psi numerically.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (DuplicateMode, NegativeVariance, NoConvergence,
                     PeriodMismatch, ZeroMRL, ZeroState)
from .geometry import (AXES, KnotSpec, ParameterizationKind, TorusSpec,
                       commutator_rhs_thin, embed, tangent)

VARIANCE_FLOOR = 1e-14
UR_SLACK = 1e-10


@dataclass(frozen=True)
class Superposition:
    """Normalized sum_j c_j exp(i n_j phi / p) / sqrt(2 p pi)."""

    p: int
    modes: tuple[int, ...]
    amplitudes: tuple[complex, ...]
    hbar: float = 1.0

    @property
    def period(self) -> float:
        return 2.0 * math.pi * self.p

    def __call__(self, phi):
        phi = np.asarray(phi, dtype=float)
        out = np.zeros(phi.shape, dtype=complex)
        for n, c in zip(self.modes, self.amplitudes):
            out += c * np.exp(1j * n * phi / self.p)
        return out / math.sqrt(self.period)

    def density(self, phi):
        return np.abs(self(phi)) ** 2

    def max_mode(self) -> int:
        return max(abs(n) for n in self.modes)


def make_superposition(p: int, modes: Iterable[tuple[int, complex]],
                       hbar: float = 1.0) -> Superposition:
    modes = [(int(n), complex(c)) for n, c in modes]
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if not modes:
        raise ZeroState("no modes given")
    ns = [n for n, _ in modes]
    if len(set(ns)) != len(ns):
        raise DuplicateMode(f"repeated mode in {ns}")
    norm = math.sqrt(sum(abs(c) ** 2 for _, c in modes))
    if norm == 0.0:
        raise ZeroState("all amplitudes vanish")
    return Superposition(p=int(p), modes=tuple(ns),
                         amplitudes=tuple(c / norm for _, c in modes),
                         hbar=float(hbar))


def equal_superposition(p: int, ns: Sequence[int], hbar: float = 1.0) -> Superposition:
    return make_superposition(p, [(n, 1.0) for n in ns], hbar)


@dataclass(frozen=True)
class QuadratureConfig:
    """Grid-doubling rectangle rule settings. ``n_start=None`` means 256 p."""

    n_start: int | None = None
    max_doublings: int = 8
    tol: float = 1e-13

    def __post_init__(self):
        if self.n_start is not None and self.n_start < 16:
            raise ValueError("n_start must be >= 16")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_doublings < 1:
            raise ValueError("max_doublings must be >= 1")

    def start_points(self, p: int) -> int:
        return self.n_start if self.n_start is not None else 256 * p


DEFAULT_QUADRATURE = QuadratureConfig()


def rectangle_rule(f: Callable, period: float, n: int):
    """Equispaced rectangle rule on [0, period) with n nodes."""
    phi = np.arange(n) * (period / n)
    return np.sum(np.asarray(f(phi), dtype=complex)) * (period / n)


def quadrature_integrate(f: Callable, period: float,
                         cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                         n_start: int | None = None) -> complex:
    """Integrate a periodic ``f`` over one period, doubling the grid until
    successive values agree to ``cfg.tol`` relative to the integral of |f|."""
    n = n_start or cfg.n_start or 256
    prev = rectangle_rule(f, period, n)
    for _ in range(cfg.max_doublings):
        n *= 2
        phi = np.arange(n) * (period / n)
        vals = np.asarray(f(phi), dtype=complex)
        cur = np.sum(vals) * (period / n)
        scale = max(abs(cur), float(np.sum(np.abs(vals))) * (period / n))
        if abs(cur - prev) <= cfg.tol * scale:
            return complex(cur)
        prev = cur
    raise NoConvergence(f"no convergence to tol={cfg.tol} after {cfg.max_doublings} doublings")


def bandwidth_bound(psi: Superposition, k: KnotSpec) -> int:
    """Grid size past which every thin-torus expectation here is exact."""
    return math.ceil(8 * k.p * (psi.max_mode() / k.p + k.q / k.p + 2))


def parse_expr(expr) -> tuple[str, ...]:
    """'x', 'x2', 'zy', ('z', 'x') ... -> tuple of axis names (degree <= 2)."""
    if isinstance(expr, str):
        s = expr.strip().lower()
        if s in ("", "1"):
            return ()
        if s.endswith("2") and len(s) == 2:
            s = s[0] * 2
        axes = tuple(s)
    else:
        axes = tuple(expr)
    if len(axes) > 2 or any(a not in AXES for a in axes):
        raise ValueError(f"unsupported coordinate expression {expr!r}")
    return axes


def _check_period(psi: Superposition, k: KnotSpec):
    if psi.p != k.p:
        raise PeriodMismatch(f"state period p={psi.p} but knot p={k.p}")


def _expect(psi: Superposition, k: KnotSpec, g: Callable, cfg: QuadratureConfig) -> float:
    _check_period(psi, k)
    val = quadrature_integrate(lambda phi: psi.density(phi) * g(phi), psi.period, cfg,
                               n_start=cfg.start_points(k.p))
    scale = max(1.0, abs(val.real))
    assert abs(val.imag) < 1e-12 * scale, f"complex expectation {val}"
    return float(val.real)


def expect_coordinate(psi: Superposition, t: TorusSpec, k: KnotSpec, expr,
                      kind: ParameterizationKind = ParameterizationKind.THIN,
                      cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    axes = parse_expr(expr)

    def g(phi):
        pt = embed(t, k, phi, kind)
        out = np.ones_like(phi)
        for ax in axes:
            out = out * pt.component(ax)
        return out

    return _expect(psi, k, g, cfg)


def expect_tangent(psi, t, k, coord, kind, cfg=DEFAULT_QUADRATURE) -> float:
    """<d coord / d phi>, i.e. <[coord, Lz]> / (i hbar)."""
    return _expect(psi, k, lambda phi: tangent(t, k, phi, kind).component(coord), cfg)


def expect_commutator_thin(psi, t, k, coord, cfg=DEFAULT_QUADRATURE) -> float:
    return _expect(psi, k, lambda phi: commutator_rhs_thin(coord, t, k, phi), cfg)


def expect_Lz_power(psi: Superposition, r: int) -> float:
    if r not in (1, 2):
        raise ValueError(f"r must be 1 or 2, got {r}")
    return float(sum(abs(c) ** 2 * (n * psi.hbar / psi.p) ** r
                     for n, c in zip(psi.modes, psi.amplitudes)))


def _sigma(second: float, first: float, name: str) -> float:
    var = second - first * first
    if var < -VARIANCE_FLOOR:
        raise NegativeVariance(f"variance of {name} is {var:.3e}")
    return math.sqrt(max(var, 0.0))


@dataclass(frozen=True)
class ExpectationReport:
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
    kind: ParameterizationKind

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = ParameterizationKind(self.kind).value
        return d


def standard_deviations(psi: Superposition, t: TorusSpec, k: KnotSpec,
                        kind: ParameterizationKind = ParameterizationKind.THIN,
                        cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> ExpectationReport:
    m = {e: expect_coordinate(psi, t, k, e, kind, cfg)
         for e in ("x", "y", "z", "xx", "yy", "zz", "zx", "zy")}
    lz, lz2 = expect_Lz_power(psi, 1), expect_Lz_power(psi, 2)
    return ExpectationReport(
        mean_x=m["x"], mean_y=m["y"], mean_z=m["z"],
        mean_x2=m["xx"], mean_y2=m["yy"], mean_z2=m["zz"],
        mean_zx=m["zx"], mean_zy=m["zy"],
        mean_Lz=lz, mean_Lz2=lz2,
        sigma_x=_sigma(m["xx"], m["x"], "x"),
        sigma_y=_sigma(m["yy"], m["y"], "y"),
        sigma_z=_sigma(m["zz"], m["z"], "z"),
        # Lz variance straight from mode weights avoids cancellation
        sigma_Lz=_lz_sigma(psi),
        kind=ParameterizationKind(kind),
    )


def _lz_sigma(psi: Superposition) -> float:
    w = np.array([abs(c) ** 2 for c in psi.amplitudes])
    lz = np.array(psi.modes, dtype=float) * psi.hbar / psi.p
    mean = float(np.dot(w, lz))
    return math.sqrt(float(np.dot(w, (lz - mean) ** 2)))


class Relation(str, enum.Enum):
    X_LZ = "X_Lz"
    Y_LZ = "Y_Lz"
    Z_LZ = "Z_Lz"
    COMBINED = "Combined"


_RELATION_OF = {"x": Relation.X_LZ, "y": Relation.Y_LZ, "z": Relation.Z_LZ}


class Source(str, enum.Enum):
    QUADRATURE = "quadrature"
    CLOSED_FORM = "closed_form"


class Commutator(str, enum.Enum):
    TANGENT = "tangent"                  # i hbar d(coord)/dphi, the actual commutator
    THIN_CLOSED_FORM = "thin_closed_form"  # the approximate thin-torus expressions


class WeightPreset(str, enum.Enum):
    MRL_GAMMA = "mrl-gamma"          # 1 + gamma
    INVERSE_GAMMA = "inverse-gamma"  # 1 + 1/gamma

    def value_at(self, gamma: float) -> float:
        if self is WeightPreset.MRL_GAMMA:
            return 1.0 + gamma
        return 1.0 + (0.0 if math.isinf(gamma) else 1.0 / gamma)


@dataclass(frozen=True)
class URReport:
    """One uncertainty relation lhs >= rhs.

    ``rhs`` is |rhs_signed|; ``margin_signed`` keeps the sign of the
    commutator expectation, which is how an inequality with a negative
    right-hand side reads when taken literally.
    """

    relation: Relation
    lhs: float
    rhs: float
    margin: float
    satisfied: bool
    source: Source
    commutator: Commutator = Commutator.TANGENT
    rhs_signed: float = 0.0
    margin_signed: float = 0.0
    weight: float | None = None

    @property
    def name(self) -> str:
        return Relation(self.relation).value

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "source": Source(self.source).value,
            "commutator": Commutator(self.commutator).value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "satisfied": self.satisfied,
            "rhs_signed": self.rhs_signed,
            "margin_signed": self.margin_signed,
            "weight": self.weight,
        }


def make_ur_report(relation, lhs, rhs_signed, source, floor,
                   commutator=Commutator.TANGENT, weight=None) -> URReport:
    """``floor`` is the natural scale (hbar * a for the single relations)."""
    rhs = abs(rhs_signed)
    margin = lhs - rhs
    scale = max(abs(lhs), rhs, floor)
    return URReport(relation=Relation(relation), lhs=float(lhs), rhs=float(rhs),
                    margin=float(margin), satisfied=bool(margin >= -UR_SLACK * scale),
                    source=Source(source), commutator=Commutator(commutator),
                    rhs_signed=float(rhs_signed), margin_signed=float(lhs - rhs_signed),
                    weight=weight)


def _commutator_expectation(psi, t, k, coord, kind, cfg, commutator) -> float:
    if Commutator(commutator) is Commutator.TANGENT:
        return expect_tangent(psi, t, k, coord, kind, cfg)
    if ParameterizationKind(kind) is not ParameterizationKind.THIN:
        raise ValueError("thin closed-form commutators need the thin parameterization")
    return expect_commutator_thin(psi, t, k, coord, cfg)


def robertson_pair(psi: Superposition, t: TorusSpec, k: KnotSpec, coord: str,
                   kind: ParameterizationKind = ParameterizationKind.THIN,
                   cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                   commutator: Commutator = Commutator.TANGENT,
                   report: ExpectationReport | None = None) -> URReport:
    """sigma_coord * sigma_Lz >= (hbar/2) |<[coord, Lz]/(i hbar)>|."""
    if coord not in AXES:
        raise ValueError(f"coord must be one of {AXES}, got {coord!r}")
    report = report or standard_deviations(psi, t, k, kind, cfg)
    lhs = getattr(report, f"sigma_{coord}") * report.sigma_Lz
    comm = _commutator_expectation(psi, t, k, coord, kind, cfg, commutator)
    return make_ur_report(_RELATION_OF[coord], lhs, 0.5 * psi.hbar * comm,
                          Source.QUADRATURE, psi.hbar * t.a, commutator)


def mean_resultant_length(psi, t, k, kind=ParameterizationKind.THIN,
                          cfg=DEFAULT_QUADRATURE, weight: float = 1.0,
                          report: ExpectationReport | None = None) -> float:
    if not weight > 0:
        raise ValueError("weight must be positive")
    r = report or standard_deviations(psi, t, k, kind, cfg)
    return math.sqrt(r.mean_x ** 2 + r.mean_y ** 2 + weight * r.mean_z ** 2)


def combined_ur(psi, t, k, kind=ParameterizationKind.THIN, cfg=DEFAULT_QUADRATURE,
                weight: float = 1.0, commutator: Commutator = Commutator.TANGENT,
                report: ExpectationReport | None = None) -> URReport:
    """(sigma_R / R) sigma_Lz against (hbar / 2R) sqrt(sum of weighted squared
    commutator expectations), sigma_R excluding the sigma_Lz factor."""
    r = report or standard_deviations(psi, t, k, kind, cfg)
    R = mean_resultant_length(psi, t, k, kind, cfg, weight, report=r)
    if R <= 1e-12 * t.a:
        raise ZeroMRL(f"mean resultant length {R:.3e} vanishes")
    sigma_r = math.sqrt(r.sigma_x ** 2 + r.sigma_y ** 2 + weight * r.sigma_z ** 2)
    comm = [_commutator_expectation(psi, t, k, c, kind, cfg, commutator) for c in AXES]
    rhs = psi.hbar / (2.0 * R) * math.sqrt(comm[0] ** 2 + comm[1] ** 2 + weight * comm[2] ** 2)
    return make_ur_report(Relation.COMBINED, sigma_r / R * r.sigma_Lz, rhs,
                          Source.QUADRATURE, psi.hbar, commutator, weight=weight)
