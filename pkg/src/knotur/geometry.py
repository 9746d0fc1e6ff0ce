"""Torus and (p, q) torus-knot geometry.

The knot sits on the surface eta = eta0 of toroidal coordinates with the
poloidal angle slaved to the toroidal one, theta = alpha * phi, where
alpha = -q/p.  Two embeddings are available: the exact one and its
first-order expansion in 1/gamma (the thin torus).  All functions accept
scalar or array ``phi``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DegenerateTorus, NonPositive, NotCoprime

AXES = ("x", "y", "z")


class ParameterizationKind(str, enum.Enum):
    EXACT = "exact"
    THIN = "thin"


@dataclass(frozen=True)
class TorusSpec:
    """Torus of scale ``a`` and aspect ratio ``gamma = R/d``.

    ``gamma = inf`` is accepted as the formal thin limit; the exact
    embedding is undefined there.
    """

    a: float
    gamma: float
    beta: float
    R: float | None = None
    d: float | None = None

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise DegenerateTorus(f"a must be positive and finite, got {self.a}")
        if not self.gamma > 1:
            raise DegenerateTorus(f"gamma must exceed 1, got {self.gamma}")

    @property
    def inv_gamma(self) -> float:
        return 0.0 if math.isinf(self.gamma) else 1.0 / self.gamma


@dataclass(frozen=True)
class KnotSpec:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise NonPositive(f"p and q must be >= 1, got ({self.p}, {self.q})")
        if math.gcd(self.p, self.q) != 1:
            raise NotCoprime(f"gcd({self.p}, {self.q}) = {math.gcd(self.p, self.q)}")

    @property
    def alpha(self) -> Fraction:
        """Winding number -q/p, exact."""
        return Fraction(-self.q, self.p)

    @property
    def nontrivial(self) -> bool:
        return self.p >= 2 and self.q >= 2

    @property
    def period(self) -> float:
        return 2.0 * math.pi * self.p


class Point3(NamedTuple):
    x: float | np.ndarray
    y: float | np.ndarray
    z: float | np.ndarray

    def component(self, axis: str):
        return getattr(self, axis)


def new_torus_from_radii(R: float, d: float) -> TorusSpec:
    if not (d > 0 and R > d):
        raise DegenerateTorus(f"need R > d > 0, got R={R}, d={d}")
    gamma = R / d
    return TorusSpec(a=math.sqrt(R * R - d * d), gamma=gamma,
                     beta=math.sqrt(gamma * gamma - 1.0), R=R, d=d)


def new_torus_from_scale(a: float, gamma: float) -> TorusSpec:
    if not a > 0:
        raise DegenerateTorus(f"a must be positive, got {a}")
    if not gamma > 1:
        raise DegenerateTorus(f"gamma must exceed 1, got {gamma}")
    beta = math.inf if math.isinf(gamma) else math.sqrt(gamma * gamma - 1.0)
    return TorusSpec(a=a, gamma=gamma, beta=beta)


def new_knot(p: int, q: int) -> KnotSpec:
    return KnotSpec(int(p), int(q))


def _angles(k: KnotSpec, phi):
    # reduce to one period first so phi and phi + 2 p pi give the same point
    phi = np.mod(phi, k.period)
    return phi, float(k.alpha) * phi


def _require_finite(t: TorusSpec):
    if math.isinf(t.gamma):
        raise DegenerateTorus("exact embedding needs finite gamma; use the thin kind for the limit")


def embed_exact(t: TorusSpec, k: KnotSpec, phi) -> Point3:
    _require_finite(t)
    phi, theta = _angles(k, phi)
    denom = t.gamma - np.cos(theta)
    return Point3(t.a * t.beta * np.cos(phi) / denom,
                  t.a * t.beta * np.sin(phi) / denom,
                  t.a * np.sin(theta) / denom)


def embed_thin(t: TorusSpec, k: KnotSpec, phi) -> Point3:
    phi, theta = _angles(k, phi)
    ring = 1.0 + np.cos(theta) * t.inv_gamma
    return Point3(t.a * np.cos(phi) * ring,
                  t.a * np.sin(phi) * ring,
                  t.a * np.sin(theta) * t.inv_gamma)


def embed(t: TorusSpec, k: KnotSpec, phi, kind: ParameterizationKind) -> Point3:
    if ParameterizationKind(kind) is ParameterizationKind.EXACT:
        return embed_exact(t, k, phi)
    return embed_thin(t, k, phi)


def tangent(t: TorusSpec, k: KnotSpec, phi, kind: ParameterizationKind) -> Point3:
    """Closed-form d/dphi of the chosen embedding."""
    phi, theta = _angles(k, phi)
    alpha = float(k.alpha)
    c, s = np.cos(theta), np.sin(theta)
    cphi, sphi = np.cos(phi), np.sin(phi)
    if ParameterizationKind(kind) is ParameterizationKind.EXACT:
        _require_finite(t)
        denom = t.gamma - c
        d2 = denom * denom
        ab = t.a * t.beta
        return Point3(ab * (-sphi * denom - cphi * alpha * s) / d2,
                      ab * (cphi * denom - sphi * alpha * s) / d2,
                      t.a * alpha * (t.gamma * c - 1.0) / d2)
    eps = t.inv_gamma
    ring = 1.0 + c * eps
    return Point3(t.a * (-sphi * ring - cphi * alpha * s * eps),
                  t.a * (cphi * ring - sphi * alpha * s * eps),
                  t.a * alpha * c * eps)


def commutator_rhs_thin(coord: str, t: TorusSpec, k: KnotSpec, phi):
    """Real factor multiplying i*hbar in the approximate thin-torus [coord, Lz]."""
    x, y, z = embed_thin(t, k, phi)
    alpha = float(k.alpha)
    if coord == "x":
        return -(y + alpha * z * x / t.a)
    if coord == "y":
        return x - alpha * z * y / t.a
    if coord == "z":
        return alpha * (t.a * t.inv_gamma - t.gamma * z * z / (2.0 * t.a))
    raise ValueError(f"coord must be one of {AXES}, got {coord!r}")


def radius_identity_residual(t: TorusSpec, k: KnotSpec, phi, kind: ParameterizationKind):
    _, theta = _angles(k, phi)
    if ParameterizationKind(kind) is ParameterizationKind.EXACT:
        x, y, z = embed_exact(t, k, phi)
        s = np.sin(theta)
        rhs = t.a ** 2 * (t.beta ** 2 + s * s) / (t.gamma - np.cos(theta)) ** 2
        return x * x + y * y + z * z - rhs
    x, y, z = embed_thin(t, k, phi)
    return x * x + y * y + (1.0 + t.gamma) * z * z - t.a ** 2 * (1.0 + 2.0 * t.inv_gamma)


def thin_exact_sup_error(t: TorusSpec, k: KnotSpec, n_points: int = 10_000) -> float:
    """Max Euclidean distance between the two embeddings on a uniform grid."""
    phi = np.arange(n_points) * (k.period / n_points)
    ex = np.array(embed_exact(t, k, phi))
    th = np.array(embed_thin(t, k, phi))
    return float(np.max(np.linalg.norm(ex - th, axis=0)))
