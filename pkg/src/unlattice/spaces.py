"""Registry of concrete (ideal X inside ambient Y) pairs.

Structural flags are declared, not computed: order continuity, atomicity,
and order density are not decidable from finite element data, so each
supported pair carries the classification the theory supplies, and the law
suite tests its consequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .elements import (
    DirectSumElem,
    Element,
    PLFn,
    StepFn,
    TailSeq,
    abs_val,
    combine,
    frac,
    is_positive,
    kind_of,
    restrict,
)
from .errors import KindMismatch, NotDense, UnsupportedPair
from .norms import ELL1, ELLINF, L1, SUML1, SUP, Lp, NormSpec, norm_value

DEFAULT_BUDGET = 16

# Band used by the band pair (the non-order-dense example).
BAND_A: tuple[tuple[Fraction, Fraction], ...] = ((Fraction(0), Fraction(1, 2)),)

# Default truncation of the uncountable index set of strictly increasing
# sequences: eight concrete increasing tuples.
DEFAULT_GAMMA: dict[str, tuple[int, ...]] = {
    "g1": tuple(range(1, 65)),
    "g2": tuple(range(2, 130, 2)),
    "g3": tuple(range(1, 129, 2)),
    "g4": tuple(k * k for k in range(1, 65)),
    "g5": tuple(range(3, 195, 3)),
    "g6": tuple(range(101, 165)),
    "g7": tuple(2**k for k in range(1, 13)),
    "g8": tuple(range(5, 325, 5)),
}


def dyadic_block(n: int) -> tuple[Fraction, Fraction]:
    """Bounds of the n-th dyadic block: n = 2^j + i covers
    [i*2^-j, (i+1)*2^-j); n = 1 is all of [0, 1)."""
    if n < 1:
        raise ValueError("block index starts at 1")
    j = n.bit_length() - 1
    i = n - (1 << j)
    width = Fraction(1, 1 << j)
    return i * width, (i + 1) * width


@dataclass(frozen=True)
class SpacePair:
    """A declared ideal X inside an ambient lattice Y, with its norm and flags."""

    id: str
    ambient: str          # L0 | RN | C01 | DSUM
    ideal: str
    norm: NormSpec
    order_continuous: bool
    atomic: bool
    order_dense: bool
    unit_kind: Optional[str]            # strong | quasi_interior | weak | None
    carrier_kinds: tuple[str, ...]
    band: Optional[tuple[tuple[Fraction, Fraction], ...]] = None
    gamma_ids: tuple[str, ...] = ()

    @property
    def metrizable(self) -> bool:
        """Quasi-interior point of X that is a weak unit of Y: order density
        upgrades a strong/quasi-interior witness to a weak unit of Y."""
        return self.unit_kind in ("strong", "quasi_interior") and self.order_dense

    @property
    def has_reducing_unit(self) -> bool:
        """True when a single test vector replaces all of X_+."""
        return self.unit_kind in ("strong", "quasi_interior")

    @property
    def norm_power(self) -> int:
        return self.norm.power

    def default_kind(self) -> str:
        return self.carrier_kinds[0]

    def check_kind(self, kind: str) -> str:
        if kind not in self.carrier_kinds:
            raise KindMismatch(f"pair {self.id} does not host carrier {kind!r}")
        return kind

    def unit_element(self, kind: Optional[str] = None) -> Element:
        """The declared witness in the requested carrier representation."""
        if self.unit_kind is None:
            raise UnsupportedPair(f"pair {self.id} declares no unit witness")
        kind = self.check_kind(kind or self.default_kind())
        if self.ambient == "RN":
            return TailSeq.ones()
        if self.ambient == "C01":
            return PLFn.ramp() if self.ideal == "X0" else PLFn.constant(1)
        if self.ambient == "DSUM":
            return DirectSumElem.make({g: StepFn.constant(1) for g in self.gamma_ids})
        if self.band is not None:
            return restrict(StepFn.constant(1), self.band)
        return StepFn.constant(1) if kind == "step" else PLFn.constant(1)

    def zero_element(self, kind: Optional[str] = None) -> Element:
        kind = self.check_kind(kind or self.default_kind())
        return {"step": StepFn.zero, "pl": PLFn.zero, "seq": TailSeq.zero,
                "dsum": DirectSumElem.zero}[kind]()

    def member_norm(self, x: Element):
        return norm_value(x, self.norm)


@dataclass(frozen=True)
class TestVectorSet:
    vectors: tuple[Element, ...]
    provenance: str  # "quasi_interior_singleton" | "dense_ideal_basis(<budget>)"


def _make_pair(pid: str) -> SpacePair:
    if pid == "L1@L0":
        return SpacePair(pid, "L0", "L1", L1, True, False, True,
                         "quasi_interior", ("step", "pl"))
    if pid == "L2@L0":
        return SpacePair(pid, "L0", "L2", Lp(2), True, False, True,
                         "quasi_interior", ("step", "pl"))
    if pid == "l1@RN":
        return SpacePair(pid, "RN", "ell1", ELL1, True, True, True,
                         "weak", ("seq",))
    if pid == "linf@RN":
        return SpacePair(pid, "RN", "ellinf", ELLINF, False, True, True,
                         "strong", ("seq",))
    if pid == "c0@RN":
        return SpacePair(pid, "RN", "c0", ELLINF, True, True, True,
                         "weak", ("seq",))
    if pid == "c00@RN":
        return SpacePair(pid, "RN", "c00", ELLINF, True, True, True,
                         "weak", ("seq",))
    if pid == "X0@C01":
        return SpacePair(pid, "C01", "X0", SUP, False, False, True,
                         "quasi_interior", ("pl",))
    if pid == "C@C01":
        return SpacePair(pid, "C01", "C", SUP, False, False, True,
                         "strong", ("pl",))
    if pid.startswith("bandA(") and pid.endswith(")@L0"):
        p = frac(pid[len("bandA("):-len(")@L0")])
        spec = L1 if p == 1 else Lp(p)
        return SpacePair(pid, "L0", f"Lp({p}) over A", spec, True, False, False,
                         "quasi_interior", ("step",), band=BAND_A)
    if pid == "suml1@gamma":
        return SpacePair(pid, "DSUM", "suml1", SUML1, True, False, True,
                         "quasi_interior", ("dsum",),
                         gamma_ids=tuple(sorted(DEFAULT_GAMMA)))
    raise UnsupportedPair(f"unknown pair descriptor {pid!r}")


_PAIR_CACHE: dict[str, SpacePair] = {}

PAIR_IDS = ("L1@L0", "L2@L0", "l1@RN", "linf@RN", "c0@RN", "c00@RN",
            "X0@C01", "C@C01", "bandA(1)@L0", "suml1@gamma")


def build_pair(descriptor: str) -> SpacePair:
    """Build a pair from its short descriptor, with flags from the fixed table."""
    if descriptor not in _PAIR_CACHE:
        _PAIR_CACHE[descriptor] = _make_pair(descriptor)
    return _PAIR_CACHE[descriptor]


def all_pairs() -> list[SpacePair]:
    return [build_pair(p) for p in PAIR_IDS]


# ---------------------------------------------------------------------------
# Test vectors
# ---------------------------------------------------------------------------

def _block_tent(n: int) -> PLFn:
    lo, hi = dyadic_block(n)
    return PLFn.tent(lo, (lo + hi) / 2, hi)


def dense_basis(pair: SpacePair, budget: int, kind: Optional[str] = None) -> list[Element]:
    """Positive vectors of a norm-dense sub-ideal of X (the replacement set
    sanctioned by the dense-ideal agreement theorem)."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    kind = pair.check_kind(kind or pair.default_kind())
    if pair.ambient == "RN":
        basis: list[Element] = [TailSeq.unit_vector(i) for i in range(1, budget + 1)]
        if pair.id == "linf@RN":
            # c00 is not norm dense in ell_inf; keep the strong unit on board
            basis = [TailSeq.ones()] + basis[: budget - 1]
        return basis
    if pair.ambient == "C01":
        head = PLFn.ramp() if pair.ideal == "X0" else PLFn.constant(1)
        return [head] + [_block_tent(n) for n in range(2, budget + 1)]
    if pair.ambient == "DSUM":
        out: list[Element] = [pair.unit_element()]
        for g in pair.gamma_ids[: budget - 1]:
            out.append(DirectSumElem.make({g: StepFn.constant(1)}))
        return out
    # L0 ambient
    if pair.band is not None:
        vecs = [pair.unit_element()]
        for n in range(2, 4 * budget):
            lo, hi = dyadic_block(n)
            blk = restrict(StepFn.indicator(lo, hi), pair.band)
            if not blk.is_zero():
                vecs.append(blk)
            if len(vecs) == budget:
                break
        return vecs
    if kind == "step":
        return [StepFn.indicator(*dyadic_block(n)) for n in range(1, budget + 1)]
    return [PLFn.constant(1)] + [_block_tent(n) for n in range(2, budget + 1)]


def test_vectors(pair: SpacePair, budget: int = DEFAULT_BUDGET,
                 kind: Optional[str] = None) -> TestVectorSet:
    """The canonical positive test set: the quasi-interior (or strong) unit
    when the pair has one, otherwise a dense sub-ideal basis."""
    if pair.has_reducing_unit:
        return TestVectorSet((pair.unit_element(kind),), "quasi_interior_singleton")
    return TestVectorSet(tuple(dense_basis(pair, budget, kind)),
                         f"dense_ideal_basis({budget})")


# ---------------------------------------------------------------------------
# Order-density witnesses
# ---------------------------------------------------------------------------

def _positive_interior_point(g: PLFn) -> Fraction:
    """Some t in (0, 1) with g(t) > 0, for g >= 0 nonzero."""
    peak_j = max(range(len(g.values)), key=lambda j: g.values[j])
    s = g.nodes[peak_j]
    if 0 < s < 1:
        return s
    if s == 0:
        return g.nodes[1] / 2
    return (g.nodes[-2] + 1) / 2


def order_dense_witness(pair: SpacePair, y: Element) -> Element:
    """A constructive x in X with 0 < x <= |y|.

    Raises NotDense when the pair is not order dense and |y| lies in the
    disjoint complement of the ideal.
    """
    if y.is_zero():
        raise ValueError("witness needs a nonzero element")
    kind = pair.check_kind(kind_of(y))
    g = abs_val(y)

    if pair.ambient == "RN":
        n = None
        for i, v in enumerate(g.prefix, start=1):
            if v != 0:
                n = i
                break
        if n is None:
            t = g.tail
            if t.kind == "zero":
                n = None
            else:
                n = len(g.prefix) + 1
                if t.at(n) == 0:
                    n += 1
        if n is None:
            raise ValueError("witness needs a nonzero element")
        return combine(g, TailSeq.unit_vector(n), "meet")

    if pair.ambient == "C01":
        if pair.ideal == "C":
            return g
        t_star = _positive_interior_point(g)
        tent = PLFn.tent(t_star / 2, t_star, (1 + t_star) / 2, height=g.eval(t_star))
        return combine(g, tent, "meet")

    if pair.ambient == "DSUM":
        for key, comp in g.components:
            sub = order_dense_witness(build_pair("L1@L0"), comp)
            return DirectSumElem.make({key: sub})
        raise ValueError("witness needs a nonzero element")

    # L0 ambient
    if pair.band is not None:
        g = restrict(g, pair.band) if kind == "step" else g
        if g.is_zero():
            raise NotDense(
                f"{pair.id} is not order dense and |y| is disjoint from the band",
                order_dense_flag=pair.order_dense,
            )
    if kind == "step":
        for lo, hi, v in g.pieces():
            if v > 0:
                return restrict(g, [(lo, hi)])
        raise ValueError("witness needs a nonzero element")
    t_star = _positive_interior_point(g)
    tent = PLFn.tent(t_star / 2, t_star, (1 + t_star) / 2, height=g.eval(t_star))
    return combine(g, tent, "meet")


def validate_test_vector(pair: SpacePair, x: Element) -> None:
    """Exact checks: positive and of finite pair norm."""
    if not is_positive(x):
        raise ValueError(f"test vector must be positive: {x}")
    if norm_value(x, pair.norm).infinite:
        raise ValueError(f"test vector lies outside {pair.id}")
