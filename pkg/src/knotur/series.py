"""Exact trigonometric series for the thin-torus embedding.

A series is a finite sum of coef * eps**order * cos(f phi) or sin(f phi)
with rational f >= 0, rational coef and eps = 1/gamma (a = 1).  Products
use the product-to-sum rules, so full-period means, and with them the
two-mode expectation values, come out as exact polynomials in eps.  This
lets one see which resonances actually survive, including cancellations
that a plain frequency-matching count misses.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction

from .geometry import KnotSpec

Poly = dict  # order -> Fraction


class TrigSeries:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for (kind, f, order), c in (terms or {}).items():
            self._add(kind, Fraction(f), order, Fraction(c))

    def _add(self, kind, f, order, c):
        if f < 0:
            f = -f
            if kind == "s":
                c = -c
        if kind == "s" and f == 0:
            return
        key = (kind, f, order)
        c = self.terms.get(key, 0) + c
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)

    @classmethod
    def cos(cls, f, coef=1, order=0):
        return cls({("c", f, order): coef})

    @classmethod
    def sin(cls, f, coef=1, order=0):
        return cls({("s", f, order): coef})

    def __add__(self, other):
        out = TrigSeries(self.terms)
        for (kind, f, o), c in other.terms.items():
            out._add(kind, f, o, c)
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c, shift: int = 0):
        """Multiply by c * eps**shift."""
        out = TrigSeries()
        for (kind, f, o), v in self.terms.items():
            out._add(kind, f, o + shift, v * Fraction(c))
        return out

    def __mul__(self, other):
        if not isinstance(other, TrigSeries):
            return self.scale(other)
        out = TrigSeries()
        half = Fraction(1, 2)
        for (k1, f1, o1), c1 in self.terms.items():
            for (k2, f2, o2), c2 in other.terms.items():
                c, o = c1 * c2 * half, o1 + o2
                if k1 == "c" and k2 == "c":
                    out._add("c", f1 - f2, o, c)
                    out._add("c", f1 + f2, o, c)
                elif k1 == "s" and k2 == "s":
                    out._add("c", f1 - f2, o, c)
                    out._add("c", f1 + f2, o, -c)
                elif k1 == "s":
                    out._add("s", f1 + f2, o, c)
                    out._add("s", f1 - f2, o, c)
                else:
                    out._add("s", f1 + f2, o, c)
                    out._add("s", f1 - f2, o, -c)
        return out

    __rmul__ = __mul__

    def derivative(self):
        out = TrigSeries()
        for (kind, f, o), c in self.terms.items():
            if kind == "c":
                out._add("s", f, o, -f * c)
            else:
                out._add("c", f, o, f * c)
        return out

    def mean(self) -> Poly:
        """Average over a common period, as {order: coefficient}."""
        out = defaultdict(Fraction)
        for (kind, f, o), c in self.terms.items():
            if kind == "c" and f == 0:
                out[o] += c
        return {o: c for o, c in sorted(out.items()) if c}

    def frequencies(self) -> set:
        return {f for (_, f, _) in self.terms}


def thin_coordinates(k: KnotSpec) -> dict[str, TrigSeries]:
    """x, y, z of the thin embedding at a = 1."""
    alpha = k.alpha
    ring_mod = TrigSeries.cos(alpha, order=1)  # cos(alpha phi)/gamma
    x = TrigSeries.cos(1) + TrigSeries.cos(1) * ring_mod
    y = TrigSeries.sin(1) + TrigSeries.sin(1) * ring_mod
    z = TrigSeries.sin(alpha, order=1)
    return {"x": x, "y": y, "z": z}


def thin_monomial(k: KnotSpec, axes) -> TrigSeries:
    coords = thin_coordinates(k)
    out = TrigSeries.cos(0)
    for ax in axes:
        out = out * coords[ax]
    return out


def thin_commutator_series(k: KnotSpec, coord: str) -> TrigSeries:
    x, y, z = thin_coordinates(k).values()
    alpha = k.alpha
    if coord == "x":
        return -(y + z * x * alpha)
    if coord == "y":
        return x - z * y * alpha
    # alpha (a/gamma - gamma z^2 / 2a); gamma z^2 drops one order
    return (TrigSeries.cos(0, order=1) - (z * z).scale(Fraction(1, 2), shift=-1)) * alpha


def two_mode_weight(n: int, k: int, p: int) -> TrigSeries:
    """|psi|^2 * period for the equal-weight two-mode state."""
    return TrigSeries.cos(0) + TrigSeries.cos(Fraction(abs(k - n), p))


def two_mode_expectation(series: TrigSeries, n: int, k: int, p: int) -> Poly:
    return (series * two_mode_weight(n, k, p)).mean()


def evaluate(poly: Poly, gamma: float, scale: float = 1.0) -> float:
    eps = 0.0 if gamma == float("inf") else 1.0 / gamma
    return scale * sum(float(c) * eps ** o for o, c in poly.items())
