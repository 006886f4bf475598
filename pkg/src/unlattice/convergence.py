"""The un-gauge, neighborhood base, un-metric, and semi-decision convergence
checkers.

Semantics of verdict classes:

* ``CertifiedNull``   -- a machine-checkable rate certificate covers every
  test vector (or grid point) and exact spot computation confirms it.
* ``EmpiricallyNull`` -- no certificate, but every exactly computed gauge at
  the tail of the horizon falls below the finest grid epsilon.
* ``Refuted``         -- a closed-form lower bound (gallery families) or
  sampled evidence shows the gauge stuck at or above some epsilon; sampled
  evidence is tagged as the weaker, empirical form of refutation.
* ``Inconclusive``    -- none of the above at this horizon.

Rate certificates bound ``gauge ** p`` where ``p`` is the pair norm's exact
power (1 for the exact norms, the even integer for L_p), so every
certificate check is an exact rational comparison.
"""

from __future__ import annotations

import zlib
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence, Union

from .elements import (
    Element,
    abs_val,
    combine,
    frac,
    is_positive,
    kind_of,
    restrict,
    scale,
    to_text,
    zero_like,
)
from .errors import BadFamily, BadUnit, CertificateViolated, KindMismatch, NotInIdeal
from .norms import NormValue, UnitNorm, level_measure, norm_value
from .sampling import sample_ambient, sample_ideal_positive
from .spaces import DEFAULT_BUDGET, SpacePair, test_vectors

DEFAULT_HORIZON = 4096
DEFAULT_EPS_GRID: tuple[Fraction, ...] = tuple(Fraction(1, 2**k) for k in range(1, 21))
DEFAULT_GRID_POINTS: tuple[Fraction, ...] = tuple(Fraction(i, 16) for i in range(16))
DEFAULT_COORDS: tuple[int, ...] = tuple(range(1, 9))


# ---------------------------------------------------------------------------
# Rate certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RateCert:
    """Closed-form decay bound.

    * ``power_law``       -- c * n**(-r), integer r >= 1
    * ``dyadic_log``      -- c * 2**(-floor(log2 n))
    * ``eventually_zero`` -- 0 for every n > cutoff (no claim before)
    * ``table``           -- rows (eps, N): the quantity is < eps for n >= N
    """

    kind: str
    c: Fraction = Fraction(1)
    r: int = 1
    cutoff: int = 0
    table: tuple[tuple[Fraction, int], ...] = ()

    def __post_init__(self):
        if self.kind not in ("power_law", "dyadic_log", "eventually_zero", "table"):
            raise ValueError(f"unknown certificate kind {self.kind!r}")
        if self.kind == "power_law" and (self.c < 0 or self.r < 1):
            raise ValueError("power law needs c >= 0 and integer r >= 1")
        if self.kind == "table":
            ns = [n for _, n in self.table]
            if not self.table or any(e <= 0 for e, _ in self.table):
                raise ValueError("table needs positive epsilons")
            if ns != sorted(ns):
                raise ValueError("table rows must have nondecreasing N")

    def claims_at(self, n: int) -> bool:
        if self.kind == "eventually_zero":
            return n > self.cutoff
        if self.kind == "table":
            return any(n >= N for _, N in self.table)
        return True

    def bound_at(self, n: int) -> Optional[Fraction]:
        if self.kind == "power_law":
            return self.c / Fraction(n**self.r)
        if self.kind == "dyadic_log":
            return self.c / Fraction(1 << (n.bit_length() - 1))
        if self.kind == "eventually_zero":
            return Fraction(0) if n > self.cutoff else None
        applicable = [eps for eps, N in self.table if n >= N]
        return min(applicable) if applicable else None

    def index_for(self, target: Fraction) -> Optional[int]:
        """Least n from which the bound stays strictly below ``target``."""
        target = frac(target)
        if target <= 0:
            return None
        if self.kind == "eventually_zero":
            return self.cutoff + 1
        if self.kind == "dyadic_log":
            j = 0
            while (1 << j) * target <= self.c:
                j += 1
            return 1 << j
        if self.kind == "power_law":
            n = max(1, int(float(self.c / target) ** (1.0 / self.r)))
            while self.c >= target * Fraction(n**self.r):
                n += 1
            while n > 1 and self.c < target * Fraction((n - 1) ** self.r):
                n -= 1
            return n
        rows = [N for eps, N in self.table if eps <= target]
        return min(rows) if rows else None

    def check_gauge(self, n: int, value: NormValue) -> bool:
        """Does the exactly computed gauge at index n respect this bound?"""
        if not self.claims_at(n):
            return True
        if self.kind == "table":
            return value.lt(self.bound_at(n))
        return value.le_power_bound(self.bound_at(n))

    def check_measure(self, n: int, measure: Fraction) -> bool:
        if not self.claims_at(n):
            return True
        if self.kind == "table":
            return measure < self.bound_at(n)
        return measure <= self.bound_at(n)

    def to_json(self) -> dict:
        if self.kind == "power_law":
            return {"kind": self.kind, "c": str(self.c), "r": self.r}
        if self.kind == "dyadic_log":
            return {"kind": self.kind, "c": str(self.c)}
        if self.kind == "eventually_zero":
            return {"kind": self.kind, "cutoff": self.cutoff}
        return {"kind": self.kind,
                "rows": [[str(e), n] for e, n in self.table]}


def power_law(c, r: int = 1) -> RateCert:
    return RateCert("power_law", c=frac(c), r=r)


def dyadic_log(c=1) -> RateCert:
    return RateCert("dyadic_log", c=frac(c))


def eventually_zero(cutoff: int) -> RateCert:
    return RateCert("eventually_zero", cutoff=cutoff)


# A certificate provider is either one cert for every test vector or a
# callable deriving a cert from the vector (None = vector not covered).
CertProvider = Union[RateCert, Callable[[Element], Optional[RateCert]]]


def resolve_cert(provider: CertProvider, x: Element) -> Optional[RateCert]:
    return provider(x) if callable(provider) else provider


# ---------------------------------------------------------------------------
# Closed-form refutations and a.e. certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Refutation:
    """Gauge lower bound along an infinite index pattern (gallery families).

    ``index_at(j)`` is the j-th index of the pattern (1-based); the default
    pattern is every index.
    """

    eps: Fraction
    description: str
    witness: Optional[Element] = None
    index_at: Callable[[int], int] = lambda j: j

    def spot_indices(self, horizon: int, cap: Optional[int], limit: int = 12) -> list[int]:
        top = min(horizon, cap) if cap else horizon
        out = []
        j = 1
        while len(out) < limit:
            n = self.index_at(j)
            if n > top:
                break
            out.append(n)
            j += 1
        return out


@dataclass(frozen=True)
class MeasureRefutation:
    level_eps: Fraction
    measure_bound: Fraction
    description: str
    index_at: Callable[[int], int] = lambda j: j

    def spot_indices(self, horizon: int, cap: Optional[int], limit: int = 12) -> list[int]:
        return Refutation(Fraction(1), "", None, self.index_at).spot_indices(horizon, cap, limit)


@dataclass(frozen=True)
class PointwiseDecay:
    """Per-point decay certificate valid off a finite null boundary set."""

    rate_at: Callable[[Fraction], RateCert]
    null_points: tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class Recurrence:
    """Values >= eps recur at every point of a set of the stated measure;
    ``hit_index(t, j)`` is the j-th index witnessing the recurrence at t."""

    eps: Fraction
    set_measure: Fraction
    hit_index: Callable[[Fraction, int], int]
    description: str


# ---------------------------------------------------------------------------
# Families and verdicts
# ---------------------------------------------------------------------------

@dataclass
class Family:
    """A sequence index -> Element with optional evidence attached.

    Certificates are keyed by pair descriptor ('*' = any pair); uniform-unit
    evidence is keyed by the serialized unit element.
    """

    name: str
    kind: str
    eval_at: Callable[[int], Element]
    un_certs: Mapping[str, CertProvider] = field(default_factory=dict)
    un_refutations: Mapping[str, Refutation] = field(default_factory=dict)
    measure_cert: Union[RateCert, Callable[[Fraction], RateCert], None] = None
    measure_refutation: Optional[MeasureRefutation] = None
    ae_cert: Optional[PointwiseDecay] = None
    ae_refutation: Optional[Recurrence] = None
    pointwise_cert: Optional[Callable[[int], RateCert]] = None
    uniform_certs: Mapping[str, RateCert] = field(default_factory=dict)
    uniform_refutations: Mapping[str, Refutation] = field(default_factory=dict)
    monotone_increasing: bool = False
    declared_supremum: Optional[Element] = None
    declared_limit: Optional[Element] = None
    max_probe_index: Optional[int] = None
    params: dict = field(default_factory=dict)
    provenance: str = ""

    def un_cert_provider(self, pair_id: str) -> Optional[CertProvider]:
        return self.un_certs.get(pair_id, self.un_certs.get("*"))


class VerdictClass(str, Enum):
    CERTIFIED_NULL = "CertifiedNull"
    EMPIRICALLY_NULL = "EmpiricallyNull"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class Verdict:
    klass: VerdictClass
    mode: str
    family: str
    pair: Optional[str]
    horizon: int
    worst_gauge: Optional[NormValue] = None
    witness: Optional[Element] = None
    eps: Optional[Fraction] = None
    evidence: Optional[dict] = None
    certificate: Optional[dict] = None
    details: dict = field(default_factory=dict)

    @property
    def is_null(self) -> bool:
        return self.klass in (VerdictClass.CERTIFIED_NULL, VerdictClass.EMPIRICALLY_NULL)

    @property
    def verdict_class(self) -> str:
        """Collapsed class used by the laws: null / refuted / inconclusive."""
        if self.is_null:
            return "null"
        return "refuted" if self.klass is VerdictClass.REFUTED else "inconclusive"

    def to_json(self) -> dict:
        out = {
            "family": self.family,
            "pair": self.pair,
            "mode": self.mode,
            "class": self.klass.value,
            "horizon": self.horizon,
        }
        if self.worst_gauge is not None:
            out["worst_gauge"] = self.worst_gauge.to_json()
        if self.witness is not None:
            out["witness"] = to_text(self.witness)
        if self.eps is not None:
            out["eps"] = str(self.eps)
        if self.evidence is not None:
            out["evidence"] = self.evidence
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.details:
            out["details"] = self.details
        return out


# ---------------------------------------------------------------------------
# The gauge and its neighborhoods
# ---------------------------------------------------------------------------

def gauge(y: Element, x: Element, pair: SpacePair) -> NormValue:
    """|| |y| ^ x ||_X, the quantity defining the base neighborhoods."""
    if not is_positive(x):
        raise ValueError("gauge needs a positive test vector")
    xn = norm_value(x, pair.norm)
    if xn.infinite:
        raise NotInIdeal(f"test vector has infinite {pair.norm.describe()} norm")
    return norm_value(combine(abs_val(y), x, "meet"), pair.norm)


def in_un_neighborhood(y: Element, eps, x: Element, pair: SpacePair) -> bool:
    """Membership in U_{eps,x}: gauge strictly below eps."""
    return gauge(y, x, pair).lt(frac(eps))


def un_metric(y1: Element, y2: Element, u: Element, pair: SpacePair) -> NormValue:
    """d(y1, y2) = || |y1 - y2| ^ u || for the pair's declared unit witness."""
    kind = kind_of(y1)
    if pair.unit_kind is None or u != pair.unit_element(kind):
        raise BadUnit(f"{to_text(u)} is not the declared witness of {pair.id}")
    return norm_value(combine(abs_val(combine(y1, y2, "diff")), u, "meet"), pair.norm)


# ---------------------------------------------------------------------------
# Index scheduling
# ---------------------------------------------------------------------------

def scan_indices(horizon: int, cap: Optional[int] = None) -> list[int]:
    """Deterministic sampled sweep: all small indices, then a coarse ladder."""
    top = min(horizon, cap) if cap else horizon
    idx = list(range(1, min(64, top) + 1))
    if top > 64:
        step = max(1, top // 64)
        idx.extend(range(64 + step, top + 1, step))
        if idx[-1] != top:
            idx.append(top)
    return idx


def verify_indices(cert: RateCert, horizon: int, cap: Optional[int] = None) -> list[int]:
    top = min(horizon, cap) if cap else horizon
    base = list(range(1, 33)) + [48, 64, 96, 128, 192, 256]
    if cert.kind == "eventually_zero":
        base += [cert.cutoff + d for d in (1, 2, 3, 5, 17)]
    if cert.kind == "table":
        base += [N for _, N in cert.table] + [N + 1 for _, N in cert.table]
    out = sorted({n for n in base if 1 <= n <= max(top, cert.cutoff + 5 if cert.kind == "eventually_zero" else top)})
    return [n for n in out if cap is None or n <= max(cap, 1)] or [1]


def _tail_of(indices: Sequence[int]) -> list[int]:
    top = indices[-1]
    tail = [n for n in indices if n > top // 2]
    return tail or [top]


# ---------------------------------------------------------------------------
# Certificate verification
# ---------------------------------------------------------------------------

def verify_certificate(fam: Family, cert: RateCert, pair: SpacePair,
                       sample_indices: Sequence[int],
                       vectors: Optional[Sequence[Element]] = None) -> bool:
    """True iff the claimed bound dominates the exactly computed gauge at
    every sampled index and test vector."""
    if not sample_indices:
        raise ValueError("sample_indices must be nonempty")
    vecs = tuple(vectors) if vectors is not None else test_vectors(pair, kind=fam.kind).vectors
    cap = fam.max_probe_index
    for n in sample_indices:
        if cap is not None and n > cap:
            continue
        y = fam.eval_at(n)
        for x in vecs:
            if not cert.check_gauge(n, gauge(y, x, pair)):
                return False
    return True


def _certificate_descriptor(per_vector: list[tuple[Element, RateCert]]) -> dict:
    uniq = {c.to_json()["kind"]: c.to_json() for _, c in per_vector}
    if len(uniq) == 1:
        return next(iter(uniq.values()))
    return {"kind": "per_vector", "certs": [c.to_json() for _, c in per_vector]}


# ---------------------------------------------------------------------------
# check_un
# ---------------------------------------------------------------------------

def check_un(fam: Family, pair: SpacePair, horizon: int = DEFAULT_HORIZON,
             eps_grid: Sequence[Fraction] = DEFAULT_EPS_GRID,
             vectors: Optional[Sequence[Element]] = None,
             budget: int = DEFAULT_BUDGET) -> Verdict:
    """Semi-decision for un-convergence of the family to zero."""
    pair.check_kind(fam.kind)
    eps_grid = [frac(e) for e in eps_grid]
    vecs = tuple(vectors) if vectors is not None else test_vectors(pair, budget, fam.kind).vectors
    cap = fam.max_probe_index

    ref = fam.un_refutations.get(pair.id)
    if ref is not None:
        spots = ref.spot_indices(horizon, cap)
        worst = None
        for n in spots:
            gv = gauge(fam.eval_at(n), ref.witness, pair)
            if gv.lt(ref.eps):
                raise CertificateViolated(
                    f"{fam.name}/{pair.id}: gauge at n={n} below the claimed refutation level")
            worst = gv if worst is None else worst.max(gv)
        return Verdict(VerdictClass.REFUTED, "un", fam.name, pair.id, horizon,
                       worst_gauge=worst, witness=ref.witness, eps=ref.eps,
                       evidence={"type": "closed_form", "description": ref.description,
                                 "spot_indices": spots})

    provider = fam.un_cert_provider(pair.id)
    if provider is not None:
        per_vector = []
        for x in vecs:
            cert = resolve_cert(provider, x)
            if cert is None:
                per_vector = None
                break
            per_vector.append((x, cert))
        if per_vector is not None:
            worst = None
            ok = True
            for x, cert in per_vector:
                for n in verify_indices(cert, horizon, cap):
                    gv = gauge(fam.eval_at(n), x, pair)
                    worst = gv if worst is None else worst.max(gv)
                    if not cert.check_gauge(n, gv):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return Verdict(VerdictClass.CERTIFIED_NULL, "un", fam.name, pair.id, horizon,
                               worst_gauge=worst,
                               certificate=_certificate_descriptor(per_vector))
            # an invalid certificate never upgrades the verdict; fall through

    return _empirical_verdict(
        mode="un", fam=fam, pair_id=pair.id, horizon=horizon, eps_grid=eps_grid,
        cases=[(x, lambda n, x=x: gauge(fam.eval_at(n), x, pair)) for x in vecs],
        cap=cap)


def _empirical_verdict(mode: str, fam: Family, pair_id: Optional[str], horizon: int,
                       eps_grid: Sequence[Fraction],
                       cases: list[tuple[Optional[Element], Callable[[int], NormValue]]],
                       cap: Optional[int]) -> Verdict:
    indices = scan_indices(horizon, cap)
    tail = _tail_of(indices)
    min_eps = min(eps_grid)
    worst = None
    tail_min: list[tuple[Optional[Element], Optional[NormValue]]] = []
    all_tail_small = True
    for witness, quantity in cases:
        low = None
        for n in indices:
            gv = quantity(n)
            worst = gv if worst is None else worst.max(gv)
            if n in tail:
                low = gv if low is None else low.min(gv)
                if not gv.lt(min_eps):
                    all_tail_small = False
        tail_min.append((witness, low))
    if all_tail_small:
        return Verdict(VerdictClass.EMPIRICALLY_NULL, mode, fam.name, pair_id, horizon,
                       worst_gauge=worst,
                       details={"tail_indices": tail})
    best_witness, best_low = max(tail_min, key=lambda wl: wl[1].key())
    for eps in sorted(eps_grid, reverse=True):
        if best_low.ge(eps):
            return Verdict(VerdictClass.REFUTED, mode, fam.name, pair_id, horizon,
                           worst_gauge=worst, witness=best_witness, eps=eps,
                           evidence={"type": "sampled_indices", "indices": tail,
                                     "note": "empirical refutation"})
    return Verdict(VerdictClass.INCONCLUSIVE, mode, fam.name, pair_id, horizon,
                   worst_gauge=worst)


# ---------------------------------------------------------------------------
# check_pointwise
# ---------------------------------------------------------------------------

def check_pointwise(fam: Family, horizon: int = DEFAULT_HORIZON,
                    coords: Optional[Sequence] = None,
                    eps_grid: Sequence[Fraction] = DEFAULT_EPS_GRID) -> Verdict:
    """Coordinatewise (sequences) or grid-pointwise (functions) null check."""
    if fam.kind == "seq":
        points: Sequence = coords if coords is not None else DEFAULT_COORDS
        return _pointwise_seq(fam, horizon, points, eps_grid)
    if fam.kind in ("step", "pl"):
        points = coords if coords is not None else DEFAULT_GRID_POINTS
        return _pointwise_grid(fam, horizon, [frac(t) for t in points], eps_grid)
    raise KindMismatch("pointwise checks need a sequence or function carrier")


def _value_verdicts(fam: Family, horizon: int, label: str, points: Sequence,
                    value_at: Callable[[int, object], Fraction],
                    cert_for: Optional[Callable[[object], Optional[RateCert]]],
                    eps_grid: Sequence[Fraction]) -> Verdict:
    cap = fam.max_probe_index
    min_eps = min(frac(e) for e in eps_grid)
    per_point = {}
    classes = set()
    worst = None
    for pt in points:
        cert = cert_for(pt) if cert_for is not None else None
        if cert is not None:
            ok = True
            for n in verify_indices(cert, horizon, cap):
                v = abs(value_at(n, pt))
                nv = NormValue.exact(v)
                worst = nv if worst is None else worst.max(nv)
                if not cert.check_measure(n, v):
                    ok = False
                    break
            if ok:
                per_point[str(pt)] = {"class": VerdictClass.CERTIFIED_NULL.value,
                                      "certificate": cert.to_json()}
                classes.add(VerdictClass.CERTIFIED_NULL)
                continue
        indices = scan_indices(horizon, cap)
        tail = _tail_of(indices)
        vals = {n: abs(value_at(n, pt)) for n in indices}
        for v in vals.values():
            nv = NormValue.exact(v)
            worst = nv if worst is None else worst.max(nv)
        if all(vals[n] < min_eps for n in tail):
            per_point[str(pt)] = {"class": VerdictClass.EMPIRICALLY_NULL.value}
            classes.add(VerdictClass.EMPIRICALLY_NULL)
        else:
            low = min(vals[n] for n in tail)
            eps_hit = next((e for e in sorted(eps_grid, reverse=True) if low >= e), None)
            if eps_hit is not None:
                per_point[str(pt)] = {"class": VerdictClass.REFUTED.value, "eps": str(eps_hit)}
                classes.add(VerdictClass.REFUTED)
            else:
                per_point[str(pt)] = {"class": VerdictClass.INCONCLUSIVE.value}
                classes.add(VerdictClass.INCONCLUSIVE)
    if VerdictClass.REFUTED in classes:
        klass = VerdictClass.REFUTED
    elif VerdictClass.INCONCLUSIVE in classes:
        klass = VerdictClass.INCONCLUSIVE
    elif classes == {VerdictClass.CERTIFIED_NULL}:
        klass = VerdictClass.CERTIFIED_NULL
    else:
        klass = VerdictClass.EMPIRICALLY_NULL
    return Verdict(klass, label, fam.name, None, horizon, worst_gauge=worst,
                   details={"points": per_point})


def _pointwise_seq(fam, horizon, coords, eps_grid) -> Verdict:
    return _value_verdicts(
        fam, horizon, "pointwise", list(coords),
        value_at=lambda n, i: fam.eval_at(n).eval(i),
        cert_for=(lambda i: fam.pointwise_cert(i)) if fam.pointwise_cert else None,
        eps_grid=eps_grid)


def _pointwise_grid(fam, horizon, points, eps_grid) -> Verdict:
    rec = fam.ae_refutation
    if rec is not None:
        verdict = _recurrence_verdict(fam, rec, horizon, points, mode="pointwise")
        if verdict is not None:
            return verdict
    decay = fam.ae_cert
    cert_for = None
    if decay is not None:
        cert_for = lambda t: None if t in decay.null_points else decay.rate_at(t)
    return _value_verdicts(
        fam, horizon, "pointwise", points,
        value_at=lambda n, t: fam.eval_at(n).eval(t),
        cert_for=cert_for, eps_grid=eps_grid)


def _recurrence_verdict(fam: Family, rec: Recurrence, horizon: int,
                        points: Sequence[Fraction], mode: str) -> Optional[Verdict]:
    cap = fam.max_probe_index
    top = min(horizon, cap) if cap else horizon
    spot = {}
    for t in points:
        hits = []
        j = 1
        while len(hits) < 8:
            n = rec.hit_index(t, j)
            j += 1
            if n > top:
                break
            value = abs(fam.eval_at(n).eval(t))
            if value < rec.eps:
                raise CertificateViolated(
                    f"{fam.name}: recurrence miss at t={t}, n={n}")
            hits.append(n)
        if len(hits) < 2:
            return None  # horizon too small to exhibit the pattern
        spot[str(t)] = hits
    return Verdict(VerdictClass.REFUTED, mode, fam.name, None, horizon,
                   eps=rec.eps,
                   evidence={"type": "closed_form", "description": rec.description,
                             "recurrence_set_measure": str(rec.set_measure),
                             "hits": spot})


# ---------------------------------------------------------------------------
# check_uniform_unit
# ---------------------------------------------------------------------------

def check_uniform_unit(fam: Family, e: Element, horizon: int = DEFAULT_HORIZON,
                       eps_grid: Sequence[Fraction] = DEFAULT_EPS_GRID) -> Verdict:
    """Verdict on ||fam(n)||_e -> 0; infinity marks elements outside I_e."""
    if not is_positive(e):
        raise ValueError("the unit must be positive")
    key = to_text(e)
    spec = UnitNorm(e)
    cap = fam.max_probe_index

    def value(n: int) -> NormValue:
        return norm_value(fam.eval_at(n), spec)

    indices = scan_indices(horizon, cap)
    finite_from = None
    for n in reversed(indices):
        if value(n).infinite:
            break
        finite_from = n
    details = {"entered_ideal_at": finite_from}

    ref = fam.uniform_refutations.get(key)
    if ref is not None:
        spots = ref.spot_indices(horizon, cap)
        worst = None
        for n in spots:
            nv = value(n)
            if nv.lt(ref.eps):
                raise CertificateViolated(f"{fam.name}: uniform norm below refutation level at n={n}")
            worst = nv if worst is None else worst.max(nv)
        return Verdict(VerdictClass.REFUTED, "uniform", fam.name, None, horizon,
                       worst_gauge=worst, eps=ref.eps, witness=e,
                       evidence={"type": "closed_form", "description": ref.description,
                                 "spot_indices": spots},
                       details=details)

    cert = fam.uniform_certs.get(key)
    if cert is not None:
        worst = None
        ok = True
        for n in verify_indices(cert, horizon, cap):
            nv = value(n)
            worst = nv if worst is None else worst.max(nv)
            if not cert.check_gauge(n, nv):
                ok = False
                break
        if ok:
            return Verdict(VerdictClass.CERTIFIED_NULL, "uniform", fam.name, None, horizon,
                           worst_gauge=worst, certificate=cert.to_json(), details=details)

    verdict = _empirical_verdict("uniform", fam, None, horizon, eps_grid,
                                 cases=[(e, value)], cap=cap)
    verdict.details.update(details)
    return verdict


# ---------------------------------------------------------------------------
# check_in_measure
# ---------------------------------------------------------------------------

def check_in_measure(fam: Family, eps_grid: Sequence[Fraction] = DEFAULT_EPS_GRID,
                     horizon: int = DEFAULT_HORIZON,
                     region=None) -> Verdict:
    """Verdict on mu{|fam(n)| > eps} -> 0 for each grid eps."""
    if fam.kind not in ("step", "pl"):
        raise KindMismatch("convergence in measure needs a function carrier")
    eps_grid = [frac(e) for e in eps_grid]
    cap = fam.max_probe_index
    if region is not None and fam.kind != "step":
        raise KindMismatch("regions are supported for step families only")

    def elem(n: int) -> Element:
        y = fam.eval_at(n)
        return restrict(y, region) if region is not None else y

    full_region = region is None

    if fam.measure_refutation is not None and full_region:
        ref = fam.measure_refutation
        spots = ref.spot_indices(horizon, cap)
        for n in spots:
            m = level_measure(elem(n), ref.level_eps)
            if m < ref.measure_bound:
                raise CertificateViolated(
                    f"{fam.name}: level measure below the refutation bound at n={n}")
        return Verdict(VerdictClass.REFUTED, "measure", fam.name, None, horizon,
                       eps=ref.level_eps,
                       evidence={"type": "closed_form", "description": ref.description,
                                 "measure_bound": str(ref.measure_bound),
                                 "spot_indices": spots})

    if fam.measure_cert is not None:
        worst = Fraction(0)
        ok = True
        used = []
        for eps in eps_grid:
            cert = fam.measure_cert(eps) if callable(fam.measure_cert) else fam.measure_cert
            used.append(cert)
            for n in verify_indices(cert, horizon, cap):
                m = level_measure(elem(n), eps)
                worst = max(worst, m)
                if not cert.check_measure(n, m):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            cert_json = used[0].to_json() if all(c == used[0] for c in used) else \
                {"kind": "per_epsilon", "certs": [c.to_json() for c in used]}
            return Verdict(VerdictClass.CERTIFIED_NULL, "measure", fam.name, None, horizon,
                           worst_gauge=NormValue.exact(worst), certificate=cert_json)

    cases = [(None, lambda n, e=eps: NormValue.exact(level_measure(elem(n), e)))
             for eps in eps_grid]
    return _empirical_verdict("measure", fam, None, horizon, eps_grid, cases, cap)


# ---------------------------------------------------------------------------
# check_ae
# ---------------------------------------------------------------------------

def check_ae(fam: Family, horizon: int = DEFAULT_HORIZON,
             points: Sequence[Fraction] = DEFAULT_GRID_POINTS) -> Verdict:
    """Almost-everywhere null check, driven entirely by declared certificates:
    decay off a null boundary set certifies, a verified recurrence refutes,
    anything else is inconclusive."""
    if fam.kind not in ("step", "pl"):
        raise KindMismatch("a.e. checks need a function carrier")
    points = [frac(t) for t in points]
    if fam.ae_refutation is not None:
        verdict = _recurrence_verdict(fam, fam.ae_refutation, horizon, points, mode="ae")
        if verdict is not None:
            return verdict
    if fam.ae_cert is not None:
        decay = fam.ae_cert
        sample = [t for t in points if t not in decay.null_points]
        verdict = _value_verdicts(
            fam, horizon, "ae", sample,
            value_at=lambda n, t: fam.eval_at(n).eval(t),
            cert_for=lambda t: decay.rate_at(t),
            eps_grid=DEFAULT_EPS_GRID)
        if verdict.klass is VerdictClass.CERTIFIED_NULL:
            verdict.details["null_boundary"] = [str(t) for t in decay.null_points]
            return verdict
    return Verdict(VerdictClass.INCONCLUSIVE, "ae", fam.name, None, horizon)


# ---------------------------------------------------------------------------
# Limit uniqueness
# ---------------------------------------------------------------------------

def shifted_family(fam: Family, c: Element, tag: str = "shift") -> Family:
    """The family n -> fam(n) - c; certificates do not transport, except that
    shifting by the zero element is the identity."""
    if c == zero_like(fam.kind):
        return fam
    return Family(name=f"{fam.name}-{tag}", kind=fam.kind,
                  eval_at=lambda n: combine(fam.eval_at(n), c, "diff"),
                  max_probe_index=fam.max_probe_index)


def limit_uniqueness_probe(pair: SpacePair, fam: Family, candidates: Sequence[Element],
                           horizon: int = DEFAULT_HORIZON,
                           eps_grid: Sequence[Fraction] = DEFAULT_EPS_GRID,
                           budget: int = DEFAULT_BUDGET) -> list[Element]:
    """Candidates c for which fam(n) - c is (certified or empirically) un-null.

    For non-order-dense pairs the list may legitimately contain more than one
    element; on a Hausdorff pair it has at most one."""
    out = []
    for i, c in enumerate(candidates):
        shifted = shifted_family(fam, c, tag=f"minus{i}")
        if check_un(shifted, pair, horizon, eps_grid, budget=budget).is_null:
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# Neighborhood-base axiom suite
# ---------------------------------------------------------------------------

@dataclass
class AxiomReport:
    pair: str
    triples: int
    zero_membership_checked: int
    intersection_cases: int
    translation_cases: int
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures


def run_neighborhood_axioms(pair: SpacePair, triples: int = 1000,
                            seed: int = 0) -> AxiomReport:
    """Exactly check the three base axioms on sampled (y, eps, x) data:
    zero membership, pairwise intersection via (min eps, x1 v x2), and
    translation y + U_{delta,x} inside U_{eps,x}."""
    rng = random.Random((seed << 16) ^ zlib.crc32(pair.id.encode()))
    kind = pair.default_kind()
    zero = pair.zero_element(kind)
    failures = []
    inside = 0
    translated = 0
    for i in range(triples):
        x1 = sample_ideal_positive(pair, rng, kind)
        x2 = sample_ideal_positive(pair, rng, kind)
        eps1 = Fraction(rng.randint(1, 8), 1 << rng.randint(0, 6))
        eps2 = Fraction(rng.randint(1, 8), 1 << rng.randint(0, 6))
        if rng.random() < 0.5:
            y = sample_ambient(pair, rng, kind)
        else:
            y = combine(sample_ideal_positive(pair, rng, kind),
                        sample_ideal_positive(pair, rng, kind), "diff")
            y = scale(rng.choice((Fraction(1, 4), Fraction(1, 2), Fraction(1))), y)

        if not in_un_neighborhood(zero, eps1, x1, pair):
            failures.append({"axiom": "zero_membership", "iteration": i})
            continue

        # intersection axiom, membership-wise on the sampled y
        xj = combine(x1, x2, "join")
        if in_un_neighborhood(y, min(eps1, eps2), xj, pair):
            inside += 1
            if not (in_un_neighborhood(y, eps1, x1, pair)
                    and in_un_neighborhood(y, eps2, x2, pair)):
                failures.append({"axiom": "intersection", "iteration": i})

        # translation axiom: any z with gauge(y) + gauge(z) < eps1 must keep
        # y + z inside U_{eps1, x1}
        gy = gauge(y, x1, pair)
        if gy.lt(eps1):
            z = scale(Fraction(1, 1 << rng.randint(0, 8)),
                      combine(sample_ideal_positive(pair, rng, kind),
                              sample_ideal_positive(pair, rng, kind), "diff"))
            gz = gauge(z, x1, pair)
            if gy.sum_lt(gz, eps1):
                translated += 1
                if not in_un_neighborhood(combine(y, z, "sum"), eps1, x1, pair):
                    failures.append({"axiom": "translation", "iteration": i})
    return AxiomReport(pair.id, triples, triples, inside, translated, failures)
