"""Closed-form example and counterexample families, with built-in rate and
refutation certificates and the expected-verdict table.

Every certificate stored here is spot-verified by exact computation before a
checker reports it; the expected table is what the acceptance suite replays.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from .convergence import (
    Family,
    MeasureRefutation,
    PointwiseDecay,
    RateCert,
    Recurrence,
    Refutation,
    dyadic_log,
    eventually_zero,
    power_law,
)
from .elements import (
    DirectSumElem,
    Element,
    PLFn,
    StepFn,
    TailSeq,
    frac,
    scale,
    to_text,
)
from .errors import BadParams
from .norms import SUP, norm_value
from .spaces import DEFAULT_GAMMA, dyadic_block

ONES = TailSeq.ones()
ONES_KEY = to_text(ONES)
CONST1_STEP = StepFn.constant(1)
CONST1_PL = PLFn.constant(1)


def _cached(fn: Callable[[int], Element], maxsize: int = 512) -> Callable[[int], Element]:
    return lru_cache(maxsize=maxsize)(fn)


# ---------------------------------------------------------------------------
# Element constructors
# ---------------------------------------------------------------------------

def typewriter_element(n: int) -> StepFn:
    """Indicator of the n-th dyadic block."""
    lo, hi = dyadic_block(n)
    return StepFn.indicator(lo, hi)


def moving_bump_element(n: int) -> PLFn:
    """Tent of height one supported on [1/(n+1), 1/n]."""
    lo, hi = Fraction(1, n + 1), Fraction(1, n)
    return PLFn.tent(lo, (lo + hi) / 2, hi)


def _sup(x: Element) -> Fraction:
    return norm_value(x, SUP).pth_power


def _slope_envelope(x: PLFn) -> Fraction:
    """Least sigma with x(t) <= sigma * t, for x >= 0 vanishing at 0."""
    best = Fraction(0)
    for s, v in zip(x.nodes, x.values):
        if s > 0:
            best = max(best, v / s)
    return best


def _decay_cutoff_inverse(t: Fraction) -> int:
    """A safe cutoff >= 1/t used by eventually-zero pointwise rates."""
    return int(1 / t) + 1


def _dyadic_decay_cutoff(t: Fraction) -> int:
    """Past this index, 2**-k <= t."""
    c = int(1 / t)
    return c.bit_length() + 1


# ---------------------------------------------------------------------------
# Family constructors
# ---------------------------------------------------------------------------

def _zero_certs() -> dict:
    return {"*": eventually_zero(0)}


def _ev_zero_support(x: Element) -> Optional[RateCert]:
    bound = x.support_bound()
    return eventually_zero(bound) if bound is not None else None


def make_zero(kind: str = "step") -> Family:
    zero_elem = {"step": StepFn.zero, "pl": PLFn.zero, "seq": TailSeq.zero,
                 "dsum": DirectSumElem.zero}[kind]()
    return Family(
        name=f"zero_{kind}", kind=kind, eval_at=lambda n: zero_elem,
        un_certs=_zero_certs(),
        measure_cert=eventually_zero(0) if kind in ("step", "pl") else None,
        ae_cert=PointwiseDecay(lambda t: eventually_zero(0)) if kind in ("step", "pl") else None,
        pointwise_cert=(lambda i: eventually_zero(0)) if kind == "seq" else None,
        declared_limit=zero_elem,
        provenance="the zero family; every mode is trivially null")


def make_constant_one() -> Family:
    return Family(
        name="constant_one", kind="step", eval_at=lambda n: CONST1_STEP,
        un_refutations={
            "L1@L0": Refutation(Fraction(1), "gauge against the constant one is 1", CONST1_STEP),
            "L2@L0": Refutation(Fraction(1), "gauge against the constant one is 1", CONST1_STEP),
        },
        measure_refutation=MeasureRefutation(
            Fraction(1, 2), Fraction(1), "superlevel set at 1/2 has full measure at every index"),
        ae_refutation=Recurrence(
            Fraction(1, 2), Fraction(1), lambda t, j: j,
            "the value is one at every point and every index"),
        provenance="constant family: refuted in every null mode")


def make_typewriter() -> Family:
    def l1_cert(x: Element) -> RateCert:
        return dyadic_log(_sup(x))

    def l2_cert(x: Element) -> RateCert:
        return dyadic_log(_sup(x) ** 2)

    def hit(t: Fraction, j: int) -> int:
        gen = j - 1
        return (1 << gen) + int(t * (1 << gen))

    return Family(
        name="typewriter", kind="step",
        eval_at=_cached(typewriter_element),
        un_certs={"L1@L0": l1_cert, "L2@L0": l2_cert},
        measure_cert=dyadic_log(1),
        ae_refutation=Recurrence(
            Fraction(1, 2), Fraction(1), hit,
            "every point is covered once per dyadic generation"),
        provenance="dyadic-block indicators: null in measure, divergent at every point")


def make_typewriter_dyadic() -> Family:
    def l1_cert(x: Element) -> RateCert:
        return power_law(_sup(x), 1)

    def l2_cert(x: Element) -> RateCert:
        return power_law(_sup(x) ** 2, 1)

    return Family(
        name="typewriter_dyadic", kind="step",
        eval_at=_cached(lambda k: typewriter_element(1 << k)),
        un_certs={"L1@L0": l1_cert, "L2@L0": l2_cert},
        measure_cert=power_law(1, 1),
        ae_cert=PointwiseDecay(
            lambda t: eventually_zero(_dyadic_decay_cutoff(t)), null_points=(Fraction(0),)),
        provenance="dyadic subsequence of the typewriter: supports shrink to a null set")


def make_unit_vectors() -> Family:
    return Family(
        name="unit_vectors", kind="seq",
        eval_at=_cached(TailSeq.unit_vector),
        un_certs={"l1@RN": _ev_zero_support, "c0@RN": _ev_zero_support,
                  "c00@RN": _ev_zero_support},
        un_refutations={"linf@RN": Refutation(
            Fraction(1), "the gauge against the constant-one sequence is 1 at every index", ONES)},
        pointwise_cert=lambda i: eventually_zero(i),
        uniform_refutations={ONES_KEY: Refutation(
            Fraction(1), "unit-norm of every standard vector is 1", ONES)},
        provenance="standard unit vectors: null against summable ideals, not against bounded ones")


def make_scaled_ramp() -> Family:
    ramp = TailSeq.ramp()

    def l1_cert(x: Element) -> Optional[RateCert]:
        bound = x.support_bound()
        if bound is None:
            return None
        return power_law(Fraction(bound * (bound + 1), 2), 1)

    def sup_cert(x: Element) -> Optional[RateCert]:
        bound = x.support_bound()
        return power_law(bound, 1) if bound is not None else None

    return Family(
        name="scaled_ramp", kind="seq",
        eval_at=_cached(lambda n: scale(Fraction(1, n), ramp)),
        un_certs={"l1@RN": l1_cert, "c0@RN": sup_cert, "c00@RN": sup_cert},
        un_refutations={"linf@RN": Refutation(
            Fraction(1), "some coordinate of z/n always reaches 1, so no scalar multiple "
                         "of z enters the unit neighborhood", ONES)},
        pointwise_cert=lambda i: power_law(i, 1),
        uniform_refutations={ONES_KEY: Refutation(
            Fraction(1), "z/n has unbounded coordinates, hence infinite unit norm", ONES)},
        provenance="the ramp z=(1,2,3,...) scaled by 1/n: coordinatewise null, never uniformly")


def make_scaled_unit() -> Family:
    def l1_cert(x: Element) -> Optional[RateCert]:
        bound = x.support_bound()
        return power_law(bound, 1) if bound is not None else None

    return Family(
        name="scaled_unit", kind="seq",
        eval_at=_cached(lambda n: scale(Fraction(1, n), ONES)),
        un_certs={"linf@RN": power_law(1, 1), "l1@RN": l1_cert,
                  "c0@RN": power_law(1, 1), "c00@RN": power_law(1, 1)},
        pointwise_cert=lambda i: power_law(1, 1),
        uniform_certs={ONES_KEY: power_law(1, 1)},
        provenance="the constant-one sequence scaled by 1/n: uniformly null")


def make_shrinking_constant() -> Family:
    return Family(
        name="shrinking_constant", kind="step",
        eval_at=_cached(lambda n: scale(Fraction(1, n), CONST1_STEP)),
        un_certs={"L1@L0": power_law(1, 1), "L2@L0": power_law(1, 2)},
        measure_cert=lambda eps: eventually_zero(_decay_cutoff_inverse(eps)),
        ae_cert=PointwiseDecay(lambda t: power_law(1, 1)),
        declared_limit=StepFn.zero(),
        provenance="constant functions of height 1/n: null in every mode")


def make_increasing_to_one() -> Family:
    return Family(
        name="increasing_to_one", kind="step",
        eval_at=_cached(lambda n: scale(Fraction(n - 1, n), CONST1_STEP)),
        monotone_increasing=True,
        declared_supremum=CONST1_STEP,
        declared_limit=CONST1_STEP,
        params={"limit_shift": "shrinking_constant"},
        provenance="heights 1 - 1/n increasing to the constant one")


def make_disjoint_blocks() -> Family:
    def ev_cert(x: Element) -> Optional[RateCert]:
        bound = x.support_bound()
        if bound is None:
            return None
        return eventually_zero(max(bound, 1).bit_length())

    return Family(
        name="disjoint_blocks", kind="seq",
        eval_at=_cached(lambda n: TailSeq.block(1 << (n - 1), 1 << n), maxsize=24),
        un_certs={"l1@RN": ev_cert, "c0@RN": ev_cert, "c00@RN": ev_cert},
        un_refutations={"linf@RN": Refutation(
            Fraction(1), "each block meets the constant-one sequence at height 1", ONES)},
        pointwise_cert=lambda i: eventually_zero(max(i, 1).bit_length()),
        uniform_refutations={ONES_KEY: Refutation(
            Fraction(1), "every block has unit norm against the constant-one unit", ONES)},
        max_probe_index=16,
        provenance="indicators of doubling coordinate blocks: pairwise disjoint")


def make_moving_bump() -> Family:
    def x0_cert(x: Element) -> RateCert:
        return power_law(_slope_envelope(x), 1)

    def l1_cert(x: Element) -> RateCert:
        return power_law(_sup(x), 2)

    def l2_cert(x: Element) -> RateCert:
        return power_law(_sup(x) ** 2, 2)

    return Family(
        name="moving_bump", kind="pl",
        eval_at=_cached(moving_bump_element),
        un_certs={"X0@C01": x0_cert, "L1@L0": l1_cert, "L2@L0": l2_cert},
        un_refutations={"C@C01": Refutation(
            Fraction(1), "each bump has sup norm exactly 1 against the constant one", CONST1_PL)},
        measure_cert=power_law(1, 2),
        ae_cert=PointwiseDecay(
            lambda t: eventually_zero(_decay_cutoff_inverse(t)), null_points=(Fraction(0),)),
        provenance="unit tents on [1/(n+1), 1/n]: null against the vanish-at-zero ideal, "
                   "refuted against the whole space")


def make_off_band_constant() -> Family:
    witness = StepFn.indicator(Fraction(1, 2), 1)
    return Family(
        name="off_band_constant", kind="step",
        eval_at=lambda n: witness,
        un_certs={"bandA(1)@L0": eventually_zero(0)},
        un_refutations={
            "L1@L0": Refutation(Fraction(1, 2), "mass 1/2 meets the constant one", CONST1_STEP),
            "L2@L0": Refutation(Fraction(1, 2), "mass 1/2 meets the constant one", CONST1_STEP),
        },
        measure_refutation=MeasureRefutation(
            Fraction(1, 2), Fraction(1, 2), "superlevel measure stays 1/2"),
        declared_limit=witness,
        provenance="constant indicator of the band complement: two un-limits over the band pair")


def make_gamma_family(gamma: Optional[dict[str, tuple[int, ...]]] = None,
                      K: int = 64) -> Family:
    gamma = dict(DEFAULT_GAMMA) if gamma is None else dict(gamma)
    if K < 1:
        raise BadParams("K must be >= 1")
    positions: dict[int, list[tuple[str, int]]] = {}
    for gid, tup in sorted(gamma.items()):
        if list(tup) != sorted(set(tup)) or any(e < 1 for e in tup):
            raise BadParams(f"{gid}: entries must be strictly increasing positive integers")
        for k, n in enumerate(tup[:K], start=1):
            positions.setdefault(n, []).append((gid, k))
    max_entry = max((n for n in positions), default=0)

    def eval_at(n: int) -> DirectSumElem:
        comps = {gid: typewriter_element(k) for gid, k in positions.get(n, ())}
        return DirectSumElem.make(comps)

    return Family(
        name="gamma_family", kind="dsum",
        eval_at=_cached(eval_at),
        un_certs={"suml1@gamma": eventually_zero(max_entry)},
        params={"gamma": {gid: list(tup) for gid, tup in sorted(gamma.items())}, "K": K},
        provenance="typewriter prefixes threaded along each increasing index tuple; "
                   "the summed family is null while every tuple-indexed subsequence "
                   "replays the full typewriter order on its own component")


# ---------------------------------------------------------------------------
# Registry, parameters, expected verdicts
# ---------------------------------------------------------------------------

_CONSTRUCTORS: dict[str, Callable[..., Family]] = {
    "zero_step": lambda: make_zero("step"),
    "zero_seq": lambda: make_zero("seq"),
    "zero_pl": lambda: make_zero("pl"),
    "constant_one": make_constant_one,
    "typewriter": make_typewriter,
    "typewriter_dyadic": make_typewriter_dyadic,
    "unit_vectors": make_unit_vectors,
    "scaled_ramp": make_scaled_ramp,
    "scaled_unit": make_scaled_unit,
    "shrinking_constant": make_shrinking_constant,
    "increasing_to_one": make_increasing_to_one,
    "disjoint_blocks": make_disjoint_blocks,
    "moving_bump": make_moving_bump,
    "off_band_constant": make_off_band_constant,
    "gamma_family": make_gamma_family,
}

FAMILY_NAMES = tuple(sorted(_CONSTRUCTORS))

_PARAM_SCHEMAS = {name: ({"gamma": "map id -> increasing integer tuple", "K": "int"}
                         if name == "gamma_family" else {})
                  for name in FAMILY_NAMES}


def family(name: str, params: Optional[dict] = None) -> Family:
    """Build a gallery family by name; gamma_family accepts {gamma, K}."""
    if name not in _CONSTRUCTORS:
        raise BadParams(f"unknown family {name!r}")
    params = params or {}
    if name == "gamma_family":
        gamma = params.get("gamma")
        if gamma is not None:
            gamma = {gid: tuple(tup) for gid, tup in gamma.items()}
        return make_gamma_family(gamma, int(params.get("K", 64)))
    if params:
        raise BadParams(f"{name} takes no parameters")
    return _CONSTRUCTORS[name]()


def default_families() -> dict[str, Family]:
    return {name: family(name) for name in FAMILY_NAMES}


# Rows: (family, scope, mode) -> verdict class.  Scope is the pair id for
# mode "un", the serialized unit for "uniform", and "" otherwise.
_C = "CertifiedNull"
_R = "Refuted"

_EXPECTED: dict[tuple[str, str, str], str] = {
    ("zero_step", "L1@L0", "un"): _C,
    ("zero_step", "L2@L0", "un"): _C,
    ("zero_step", "", "measure"): _C,
    ("zero_step", "", "ae"): _C,
    ("zero_seq", "l1@RN", "un"): _C,
    ("zero_seq", "linf@RN", "un"): _C,
    ("zero_seq", "c0@RN", "un"): _C,
    ("zero_seq", "c00@RN", "un"): _C,
    ("zero_seq", "", "pointwise"): _C,
    ("constant_one", "L1@L0", "un"): _R,
    ("constant_one", "L2@L0", "un"): _R,
    ("constant_one", "", "measure"): _R,
    ("constant_one", "", "ae"): _R,
    ("typewriter", "L1@L0", "un"): _C,
    ("typewriter", "L2@L0", "un"): _C,
    ("typewriter", "", "measure"): _C,
    ("typewriter", "", "ae"): _R,
    ("typewriter", "", "pointwise"): _R,
    ("typewriter_dyadic", "L1@L0", "un"): _C,
    ("typewriter_dyadic", "L2@L0", "un"): _C,
    ("typewriter_dyadic", "", "measure"): _C,
    ("typewriter_dyadic", "", "ae"): _C,
    ("moving_bump", "X0@C01", "un"): _C,
    ("moving_bump", "C@C01", "un"): _R,
    ("moving_bump", "L1@L0", "un"): _C,
    ("moving_bump", "L2@L0", "un"): _C,
    ("moving_bump", "", "measure"): _C,
    ("moving_bump", "", "ae"): _C,
    ("unit_vectors", "l1@RN", "un"): _C,
    ("unit_vectors", "c0@RN", "un"): _C,
    ("unit_vectors", "c00@RN", "un"): _C,
    ("unit_vectors", "linf@RN", "un"): _R,
    ("unit_vectors", "", "pointwise"): _C,
    ("unit_vectors", ONES_KEY, "uniform"): _R,
    ("scaled_ramp", "linf@RN", "un"): _R,
    ("scaled_ramp", "l1@RN", "un"): _C,
    ("scaled_ramp", "c0@RN", "un"): _C,
    ("scaled_ramp", "c00@RN", "un"): _C,
    ("scaled_ramp", "", "pointwise"): _C,
    ("scaled_ramp", ONES_KEY, "uniform"): _R,
    ("scaled_unit", "linf@RN", "un"): _C,
    ("scaled_unit", "l1@RN", "un"): _C,
    ("scaled_unit", "c0@RN", "un"): _C,
    ("scaled_unit", "c00@RN", "un"): _C,
    ("scaled_unit", "", "pointwise"): _C,
    ("scaled_unit", ONES_KEY, "uniform"): _C,
    ("shrinking_constant", "L1@L0", "un"): _C,
    ("shrinking_constant", "L2@L0", "un"): _C,
    ("shrinking_constant", "", "measure"): _C,
    ("shrinking_constant", "", "ae"): _C,
    ("disjoint_blocks", "l1@RN", "un"): _C,
    ("disjoint_blocks", "c0@RN", "un"): _C,
    ("disjoint_blocks", "c00@RN", "un"): _C,
    ("disjoint_blocks", "linf@RN", "un"): _R,
    ("disjoint_blocks", "", "pointwise"): _C,
    ("disjoint_blocks", ONES_KEY, "uniform"): _R,
    ("off_band_constant", "bandA(1)@L0", "un"): _C,
    ("off_band_constant", "L1@L0", "un"): _R,
    ("off_band_constant", "L2@L0", "un"): _R,
    ("off_band_constant", "", "measure"): _R,
    ("gamma_family", "suml1@gamma", "un"): _C,
}


def expected_table() -> dict[tuple[str, str, str], str]:
    """(family, scope, mode) -> expected verdict class."""
    return dict(_EXPECTED)


def expected_rows(name: str) -> list[dict]:
    return [{"scope": scope, "mode": mode, "class": klass}
            for (fam, scope, mode), klass in sorted(_EXPECTED.items()) if fam == name]


def list_entries() -> list[dict]:
    """Gallery listing for the CLI: name, parameter schema, note, expected rows."""
    out = []
    for name in FAMILY_NAMES:
        fam = family(name)
        out.append({
            "name": name,
            "params": _PARAM_SCHEMAS[name],
            "note": fam.provenance,
            "expected": expected_rows(name),
        })
    return out
