"""Norms and measure-of-level-set computations for lattice elements.

Exact norms (L1, sup, ell_1, ell_inf, unit norm, summed L1) produce plain
Fractions.  L_p norms carry their exact p-th power when p is an even
integer, so order comparisons against rational thresholds stay exact; the
p-th root itself is reported as a binary-64 value.  For other p the value is
binary-64 with relative tolerance 1e-12, the single sanctioned floating
computation in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .elements import (
    DirectSumElem,
    Element,
    PLFn,
    StepFn,
    TailSeq,
    abs_val,
    frac,
    kind_of,
)
from .errors import KindMismatch

INF = float("inf")

ExtScalar = Union[Fraction, float]


def is_finite(x: ExtScalar) -> bool:
    return isinstance(x, Fraction) or math.isfinite(x)


# ---------------------------------------------------------------------------
# Norm specifiers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormSpec:
    """One of l1 | lp(p) | sup | unit(e) | ell1 | ellinf | suml1."""

    kind: str
    p: Optional[Fraction] = None
    unit: Optional[Element] = None

    KINDS = ("l1", "lp", "sup", "unit", "ell1", "ellinf", "suml1")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "lp":
            if self.p is None or self.p < 1:
                raise ValueError("lp norm needs p >= 1")
        if self.kind == "unit" and self.unit is None:
            raise ValueError("unit norm needs its unit element")

    @property
    def even_integer_p(self) -> Optional[int]:
        if self.kind == "lp" and self.p.denominator == 1 and self.p.numerator % 2 == 0:
            return int(self.p)
        return None

    @property
    def power(self) -> int:
        """Exponent at which the norm value is carried exactly (1 or even p)."""
        if self.kind == "lp":
            q = self.even_integer_p
            return q if q is not None else 1
        return 1

    def describe(self) -> str:
        if self.kind == "lp":
            return f"lp({self.p})"
        if self.kind == "unit":
            return "unit"
        return self.kind


L1 = NormSpec("l1")
SUP = NormSpec("sup")
ELL1 = NormSpec("ell1")
ELLINF = NormSpec("ellinf")
SUML1 = NormSpec("suml1")


def Lp(p) -> NormSpec:
    return NormSpec("lp", p=frac(p))


def UnitNorm(e: Element) -> NormSpec:
    return NormSpec("unit", unit=e)


# ---------------------------------------------------------------------------
# Norm values with exact comparison support
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NormValue:
    """A norm outcome.

    ``pth_power`` is the exact value of norm**power (None only for the
    floating lp path); ``approx`` is the binary-64 norm itself;
    ``infinite`` marks elements outside the space.
    """

    power: int
    pth_power: Optional[Fraction]
    approx: float
    infinite: bool = False

    REL_TOL = 1e-12  # documented tolerance of the floating lp path

    @staticmethod
    def exact(value: Fraction, power: int = 1) -> "NormValue":
        root = float(value) ** (1.0 / power) if power > 1 else float(value)
        return NormValue(power, value, root)

    @staticmethod
    def infinity() -> "NormValue":
        return NormValue(1, None, INF, infinite=True)

    @staticmethod
    def approximate(x: float) -> "NormValue":
        return NormValue(1, None, x)

    @property
    def is_exact(self) -> bool:
        return self.infinite or self.pth_power is not None

    def lt(self, eps: Fraction) -> bool:
        """norm < eps, exact whenever the norm is exact."""
        eps = frac(eps)
        if self.infinite:
            return False
        if self.pth_power is not None:
            if eps <= 0:
                return False
            return self.pth_power < eps**self.power
        return self.approx < float(eps)

    def ge(self, eps: Fraction) -> bool:
        return not self.lt(eps)

    def le_power_bound(self, bound: Fraction) -> bool:
        """norm**power <= bound, the comparison used by rate certificates."""
        if self.infinite:
            return False
        if self.pth_power is not None:
            return self.pth_power <= frac(bound)
        return self.approx ** self.power <= float(bound) * (1 + self.REL_TOL)

    def sum_lt(self, other: "NormValue", eps: Fraction) -> bool:
        """norm_a + norm_b < eps, exact for powers 1 and 2."""
        eps = frac(eps)
        if eps <= 0 or self.infinite or other.infinite:
            return False
        if self.power != other.power or self.pth_power is None or other.pth_power is None:
            return self.approx + other.approx < float(eps)
        if self.power == 1:
            return self.pth_power + other.pth_power < eps
        if self.power == 2:
            # sqrt(a) + sqrt(b) < eps  <=>  a + b < eps^2 and 4ab < (eps^2-a-b)^2
            a, b = self.pth_power, other.pth_power
            s = eps * eps - a - b
            if s <= 0:
                return False
            return 4 * a * b < s * s
        return self.approx + other.approx < float(eps)

    def key(self):
        """Sort key: infinite values dominate; exact before approximate ties."""
        if self.infinite:
            return (2, 0.0)
        if self.pth_power is not None:
            return (1, self.pth_power)
        return (1, self.approx**self.power)

    def max(self, other: "NormValue") -> "NormValue":
        return self if self.key() >= other.key() else other

    def min(self, other: "NormValue") -> "NormValue":
        return self if self.key() <= other.key() else other

    def scalar(self) -> ExtScalar:
        """Norm as Fraction (power 1, exact), INF, or a binary-64 root."""
        if self.infinite:
            return INF
        if self.power == 1 and self.pth_power is not None:
            return self.pth_power
        return self.approx

    def __eq__(self, other):
        if isinstance(other, NormValue):
            return self.key() == other.key() and self.infinite == other.infinite
        if isinstance(other, (int, Fraction)):
            other = frac(other)
            if self.infinite:
                return False
            if self.pth_power is not None:
                return other >= 0 and self.pth_power == other**self.power
            return self.approx == float(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.infinite, self.key()))

    def to_json(self) -> dict:
        if self.infinite:
            return {"power": self.power, "value": "inf"}
        if self.pth_power is not None:
            return {"power": self.power, "value": str(self.pth_power)}
        return {"power": self.power, "value": self.approx, "approx": True}


# ---------------------------------------------------------------------------
# Kind compatibility
# ---------------------------------------------------------------------------

_COMPAT = {
    "l1": ("step", "pl"),
    "lp": ("step", "pl"),
    "sup": ("step", "pl"),
    "ell1": ("seq",),
    "ellinf": ("seq",),
    "suml1": ("dsum",),
}


def _check_kind(a: Element, spec: NormSpec) -> str:
    k = kind_of(a)
    if spec.kind == "unit":
        if kind_of(spec.unit) != k:
            raise KindMismatch(f"unit norm over {kind_of(spec.unit)} applied to {k}")
        return k
    if k not in _COMPAT[spec.kind]:
        raise KindMismatch(f"norm {spec.kind} undefined on carrier {k}")
    return k


# ---------------------------------------------------------------------------
# Exact integrals
# ---------------------------------------------------------------------------

def _step_l1(f: StepFn) -> Fraction:
    return sum((abs(v) * (hi - lo) for lo, hi, v in f.pieces()), Fraction(0))


def _step_lp_even(f: StepFn, p: int) -> Fraction:
    return sum((v**p * (hi - lo) for lo, hi, v in f.pieces()), Fraction(0))


def _pl_l1(f: PLFn) -> Fraction:
    g = abs_val(f)
    total = Fraction(0)
    for lo, hi, w0, w1 in g.segments():
        total += (w0 + w1) * (hi - lo) / 2
    return total


def _pl_lp_even(f: PLFn, p: int) -> Fraction:
    # on each segment f = w0 + m*u with u in [0, d]; integrate the polynomial
    total = Fraction(0)
    for lo, hi, w0, w1 in f.segments():
        d = hi - lo
        if w0 == w1:
            total += w0**p * d
        else:
            m = (w1 - w0) / d
            total += (w1 ** (p + 1) - w0 ** (p + 1)) / (m * (p + 1))
    return total


def _pl_lp_float(f: PLFn, p: float) -> float:
    g = abs_val(f)
    total = 0.0
    for lo, hi, w0, w1 in g.segments():
        d = float(hi - lo)
        a, b = float(w0), float(w1)
        if a == b:
            total += a**p * d
        else:
            m = (b - a) / d
            total += (b ** (p + 1) - a ** (p + 1)) / (m * (p + 1))
    return total


def _unit_norm_lambda(f: Element, e: Element) -> Optional[Fraction]:
    """inf{lam > 0 : |f| <= lam*e}, or None when no finite lam works."""
    from .elements import is_nonnegative

    if not is_nonnegative(e):
        raise ValueError("unit element must be nonnegative")
    g = abs_val(f)
    k = kind_of(f)
    best = Fraction(0)

    def ratio(num: Fraction, den: Fraction) -> Optional[Fraction]:
        nonlocal best
        if den == 0:
            return None if num > 0 else best
        if den < 0:
            raise ValueError("unit element must be nonnegative")
        cand = num / den
        if cand > best:
            best = cand
        return best

    if k == "step":
        pts = sorted(set(g.breakpoints) | set(e.breakpoints))
        for lo in pts[:-1]:
            if ratio(g.eval(lo), e.eval(lo)) is None:
                return None
        return best
    if k == "pl":
        pts = sorted(set(g.nodes) | set(e.nodes))
        for t in pts:
            if ratio(g.eval(t), e.eval(t)) is None:
                return None
        return best
    if k == "seq":
        length = max(len(g.prefix), len(e.prefix))
        for n in range(1, length + 1):
            if ratio(g.eval(n), e.eval(n)) is None:
                return None
        ga, gb = g.tail.a, g.tail.b
        ea, eb = e.tail.a, e.tail.b
        if ga == 0 and gb == 0:
            return best
        if ea == 0 and eb == 0:
            return None
        if ea == 0:
            if ga != 0:
                return None  # affine numerator over constant unit is unbounded
            return ratio(gb, eb)
        # both tails affine-ish with ea != 0: the ratio is a Moebius function,
        # monotone beyond the last kink; its sup is attained at the first tail
        # index or in the limit a_g / a_e
        n0 = length + 1
        if e.tail.at(n0) <= 0:
            raise ValueError("unit element must be positive on the tail")
        if ratio(g.tail.at(n0), e.tail.at(n0)) is None:
            return None
        limit = abs(ga) / ea
        if limit > best:
            best = limit
        return best
    # direct sums: componentwise, every nonzero component of f needs one in e
    for key, comp in f.components:
        lam = _unit_norm_lambda(comp, e.component(key))
        if lam is None:
            return None
        if lam > best:
            best = lam
    return best


# ---------------------------------------------------------------------------
# Public norm entry points
# ---------------------------------------------------------------------------

def norm_value(a: Element, spec: NormSpec) -> NormValue:
    k = _check_kind(a, spec)

    if spec.kind == "l1":
        return NormValue.exact(_step_l1(a) if k == "step" else _pl_l1(a))

    if spec.kind == "sup":
        return NormValue.exact(max(abs(v) for v in a.values))

    if spec.kind == "ell1":
        if a.tail.kind != "zero":
            return NormValue.infinity()
        return NormValue.exact(sum((abs(v) for v in a.prefix), Fraction(0)))

    if spec.kind == "ellinf":
        if a.tail.kind == "affine":
            return NormValue.infinity()
        peak = abs(a.tail.b)
        for v in a.prefix:
            peak = max(peak, abs(v))
        return NormValue.exact(peak)

    if spec.kind == "suml1":
        return NormValue.exact(sum((_step_l1(f) for _, f in a.components), Fraction(0)))

    if spec.kind == "unit":
        lam = _unit_norm_lambda(a, spec.unit)
        return NormValue.infinity() if lam is None else NormValue.exact(lam)

    # lp
    q = spec.even_integer_p
    if q is not None:
        val = _step_lp_even(a, q) if k == "step" else _pl_lp_even(a, q)
        return NormValue.exact(val, power=q)
    p = float(spec.p)
    if k == "step":
        total = sum(abs(float(v)) ** p * float(hi - lo) for lo, hi, v in a.pieces())
    else:
        total = _pl_lp_float(a, p)
    return NormValue.approximate(total ** (1.0 / p))


def norm(a: Element, spec: NormSpec) -> ExtScalar:
    """The norm as an ExtScalar: exact Fraction where the norm is exact,
    INF outside the space, binary-64 for lp roots."""
    return norm_value(a, spec).scalar()


# ---------------------------------------------------------------------------
# Superlevel sets and their measure
# ---------------------------------------------------------------------------

def superlevel_set(f: Element, eps) -> list[tuple[Fraction, Fraction]]:
    """Essentially-disjoint intervals covering {t : |f(t)| > eps} exactly.

    Endpoints are exact rationals; single boundary points carry no measure.
    """
    eps = frac(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    k = kind_of(f)
    out: list[tuple[Fraction, Fraction]] = []

    def push(lo: Fraction, hi: Fraction):
        if hi <= lo:
            return
        if out and out[-1][1] == lo:
            out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))

    if k == "step":
        for lo, hi, v in f.pieces():
            if abs(v) > eps:
                push(lo, hi)
        return out
    if k == "pl":
        g = abs_val(f)
        for lo, hi, w0, w1 in g.segments():
            if w0 == w1:
                if w0 > eps:
                    push(lo, hi)
                continue
            # g affine across the cell: solve g == eps once
            t_star = lo + (eps - w0) * (hi - lo) / (w1 - w0)
            if w1 > w0:
                push(max(lo, min(hi, t_star)), hi)
            else:
                push(lo, max(lo, min(hi, t_star)))
        return out
    raise KindMismatch("superlevel sets need a function carrier")


def level_measure(f: Element, eps) -> Fraction:
    """Exact Lebesgue measure of {t in [0,1] : |f(t)| > eps}."""
    return sum((hi - lo for lo, hi in superlevel_set(f, eps)), Fraction(0))
