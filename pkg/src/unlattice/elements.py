"""Exact lattice elements: step functions, piecewise-linear functions,
eventually-affine sequences, and finite direct sums of step functions.

All scalars are ``fractions.Fraction``.  Every element is an immutable value
in a canonical form, so structural equality coincides with pointwise
(a.e. / coordinatewise) equality on its carrier:

* ``StepFn``    -- right-open constant pieces on [0, 1); the single point 1
  has measure zero and evaluates to the last piece's value.
* ``PLFn``      -- continuous, affine between nodes on [0, 1].
* ``TailSeq``   -- coordinates indexed 1, 2, ...; an explicit finite prefix
  followed by a closed-form tail (zero, constant, or affine ``a*n + b``).
* ``DirectSumElem`` -- finitely many named ``StepFn`` components, absent
  components are zero.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import BadRegion, KindMismatch

Rat = Fraction

_OPS: dict[str, Callable[[Fraction, Fraction], Fraction]] = {
    "meet": min,
    "join": max,
    "sum": lambda a, b: a + b,
    "diff": lambda a, b: a - b,
}


def frac(x) -> Fraction:
    """Coerce ints, strings like '3/4', and Fractions to Fraction."""
    return x if isinstance(x, Fraction) else Fraction(x)


def frac_str(x: Fraction) -> str:
    return str(x)


# ---------------------------------------------------------------------------
# Step functions on [0, 1)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepFn:
    """Right-continuous step function: value ``values[i]`` on
    ``[breakpoints[i], breakpoints[i+1])``.

    Canonical form: breakpoints strictly increasing from 0 to 1 and no two
    adjacent values equal.
    """

    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    KIND = "step"

    @staticmethod
    def make(breakpoints: Sequence, values: Sequence) -> "StepFn":
        bps = [frac(t) for t in breakpoints]
        vals = [frac(v) for v in values]
        if len(bps) != len(vals) + 1:
            raise ValueError("need one more breakpoint than values")
        if bps[0] != 0 or bps[-1] != 1:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        out_b = [bps[0]]
        out_v: list[Fraction] = []
        for i, v in enumerate(vals):
            if out_v and out_v[-1] == v:
                out_b[-1] = bps[i + 1]
            else:
                out_v.append(v)
                out_b.append(bps[i + 1])
        return StepFn(tuple(out_b), tuple(out_v))

    @staticmethod
    def constant(c) -> "StepFn":
        return StepFn.make([0, 1], [frac(c)])

    @staticmethod
    def zero() -> "StepFn":
        return StepFn.constant(0)

    @staticmethod
    def indicator(lo, hi, height: Fraction = Fraction(1)) -> "StepFn":
        lo, hi = frac(lo), frac(hi)
        if not (0 <= lo < hi <= 1):
            raise ValueError("indicator interval must sit inside [0, 1]")
        bps = [Fraction(0)]
        vals = []
        if lo > 0:
            bps.append(lo)
            vals.append(Fraction(0))
        bps.append(hi)
        vals.append(frac(height))
        if hi < 1:
            bps.append(Fraction(1))
            vals.append(Fraction(0))
        return StepFn.make(bps, vals)

    def eval(self, t) -> Fraction:
        t = frac(t)
        if not (0 <= t <= 1):
            raise ValueError("step functions live on [0, 1]")
        if t == 1:
            return self.values[-1]
        i = bisect_right(self.breakpoints, t) - 1
        return self.values[i]

    def pieces(self) -> Iterable[tuple[Fraction, Fraction, Fraction]]:
        """Yield (left, right, value) for each constant piece."""
        for i, v in enumerate(self.values):
            yield self.breakpoints[i], self.breakpoints[i + 1], v

    def is_zero(self) -> bool:
        return self.values == (Fraction(0),)


def _step_combine(a: StepFn, b: StepFn, fn) -> StepFn:
    pts = sorted(set(a.breakpoints) | set(b.breakpoints))
    vals = [fn(a.eval(lo), b.eval(lo)) for lo in pts[:-1]]
    return StepFn.make(pts, vals)


# ---------------------------------------------------------------------------
# Piecewise-linear (continuous) functions on [0, 1]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PLFn:
    """Continuous piecewise-linear function through ``(nodes[j], values[j])``.

    Canonical form: nodes strictly increasing from 0 to 1 and no interior
    node collinear with its neighbours.
    """

    nodes: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    KIND = "pl"

    @staticmethod
    def make(nodes: Sequence, values: Sequence) -> "PLFn":
        ns = [frac(t) for t in nodes]
        vs = [frac(v) for v in values]
        if len(ns) != len(vs) or len(ns) < 2:
            raise ValueError("need matching node and value lists of length >= 2")
        if ns[0] != 0 or ns[-1] != 1:
            raise ValueError("nodes must start at 0 and end at 1")
        if any(a >= b for a, b in zip(ns, ns[1:])):
            raise ValueError("nodes must be strictly increasing")
        out_n = [ns[0]]
        out_v = [vs[0]]
        for j in range(1, len(ns) - 1):
            # drop node j when it sits exactly on the chord of its neighbours
            s0, w0 = out_n[-1], out_v[-1]
            s1, w1 = ns[j], vs[j]
            s2, w2 = ns[j + 1], vs[j + 1]
            if (w1 - w0) * (s2 - s1) == (w2 - w1) * (s1 - s0):
                continue
            out_n.append(s1)
            out_v.append(w1)
        out_n.append(ns[-1])
        out_v.append(vs[-1])
        return PLFn(tuple(out_n), tuple(out_v))

    @staticmethod
    def constant(c) -> "PLFn":
        return PLFn.make([0, 1], [frac(c), frac(c)])

    @staticmethod
    def zero() -> "PLFn":
        return PLFn.constant(0)

    @staticmethod
    def ramp() -> "PLFn":
        return PLFn.make([0, 1], [0, 1])

    @staticmethod
    def tent(lo, mid, hi, height=Fraction(1)) -> "PLFn":
        """Tent rising from 0 at ``lo`` to ``height`` at ``mid``, back to 0 at ``hi``."""
        lo, mid, hi, height = frac(lo), frac(mid), frac(hi), frac(height)
        if not (0 <= lo < mid < hi <= 1):
            raise ValueError("need 0 <= lo < mid < hi <= 1")
        ns = [Fraction(0)]
        vs = [Fraction(0)]
        for t, v in ((lo, Fraction(0)), (mid, height), (hi, Fraction(0)), (Fraction(1), Fraction(0))):
            if t > ns[-1]:
                ns.append(t)
                vs.append(v)
        return PLFn.make(ns, vs)

    def eval(self, t) -> Fraction:
        t = frac(t)
        if not (0 <= t <= 1):
            raise ValueError("pl functions live on [0, 1]")
        if t == 1:
            return self.values[-1]
        j = bisect_right(self.nodes, t) - 1
        s0, s1 = self.nodes[j], self.nodes[j + 1]
        w0, w1 = self.values[j], self.values[j + 1]
        return w0 + (w1 - w0) * (t - s0) / (s1 - s0)

    def segments(self) -> Iterable[tuple[Fraction, Fraction, Fraction, Fraction]]:
        """Yield (left, right, left value, right value) per affine segment."""
        for j in range(len(self.nodes) - 1):
            yield self.nodes[j], self.nodes[j + 1], self.values[j], self.values[j + 1]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)


def _pl_combine(a: PLFn, b: PLFn, op: str) -> PLFn:
    pts = sorted(set(a.nodes) | set(b.nodes))
    if op in ("meet", "join"):
        # refine with the exact crossing of the two affine pieces in each cell
        refined = []
        for lo, hi in zip(pts, pts[1:]):
            refined.append(lo)
            d0 = a.eval(lo) - b.eval(lo)
            d1 = a.eval(hi) - b.eval(hi)
            if (d0 > 0 and d1 < 0) or (d0 < 0 and d1 > 0):
                refined.append(lo + (hi - lo) * d0 / (d0 - d1))
        refined.append(pts[-1])
        pts = refined
    fn = _OPS[op]
    vals = [fn(a.eval(t), b.eval(t)) for t in pts]
    return PLFn.make(pts, vals)


# ---------------------------------------------------------------------------
# Eventually-affine sequences (coordinates indexed from 1)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tail:
    """Closed-form tail ``n -> a*n + b``; (0, 0) is the zero tail."""

    a: Fraction
    b: Fraction

    @property
    def kind(self) -> str:
        if self.a == 0 and self.b == 0:
            return "zero"
        if self.a == 0:
            return "const"
        return "affine"

    def at(self, n: int) -> Fraction:
        return self.a * n + self.b


TAIL_ZERO = Tail(Fraction(0), Fraction(0))


@dataclass(frozen=True)
class TailSeq:
    """Sequence with explicit prefix (coordinates 1..len(prefix)) and an
    affine tail beyond it.

    Canonical form: the tail is reduced (zero/const/affine) and the prefix is
    minimal, i.e. its last entry differs from the tail evaluated there.
    """

    prefix: tuple[Fraction, ...]
    tail: Tail

    KIND = "seq"

    @staticmethod
    def make(prefix: Sequence, tail: Tail | None = None) -> "TailSeq":
        tl = tail if tail is not None else TAIL_ZERO
        tl = Tail(frac(tl.a), frac(tl.b))
        pre = [frac(v) for v in prefix]
        while pre and pre[-1] == tl.at(len(pre)):
            pre.pop()
        return TailSeq(tuple(pre), tl)

    @staticmethod
    def from_values(values: Sequence) -> "TailSeq":
        return TailSeq.make(values, TAIL_ZERO)

    @staticmethod
    def zero() -> "TailSeq":
        return TailSeq.make([], TAIL_ZERO)

    @staticmethod
    def ones() -> "TailSeq":
        """The constant-one sequence."""
        return TailSeq.make([], Tail(Fraction(0), Fraction(1)))

    @staticmethod
    def unit_vector(i: int) -> "TailSeq":
        if i < 1:
            raise ValueError("coordinates are indexed from 1")
        return TailSeq.make([0] * (i - 1) + [1], TAIL_ZERO)

    @staticmethod
    def ramp() -> "TailSeq":
        """z = (1, 2, 3, ...)."""
        return TailSeq.make([], Tail(Fraction(1), Fraction(0)))

    @staticmethod
    def block(lo: int, hi: int) -> "TailSeq":
        """Indicator of the coordinate block [lo, hi) (1-based, half-open)."""
        if not (1 <= lo < hi):
            raise ValueError("need 1 <= lo < hi")
        return TailSeq.make([0] * (lo - 1) + [1] * (hi - lo), TAIL_ZERO)

    def eval(self, n: int) -> Fraction:
        if n < 1:
            raise ValueError("coordinates are indexed from 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.tail.at(n)

    def is_zero(self) -> bool:
        return not self.prefix and self.tail.kind == "zero"

    def support_bound(self) -> int | None:
        """Largest possibly-nonzero coordinate, or None when the tail is nonzero."""
        if self.tail.kind != "zero":
            return None
        return len(self.prefix)


def _tail_combine(x: TailSeq, y: TailSeq, op: str) -> TailSeq:
    ax, bx = x.tail.a, x.tail.b
    ay, by = y.tail.a, y.tail.b
    length = max(len(x.prefix), len(y.prefix))
    if op in ("sum", "diff"):
        sign = 1 if op == "sum" else -1
        tail = Tail(ax + sign * ay, bx + sign * by)
    else:
        if ax == ay:
            pick_x = (bx <= by) if op == "meet" else (bx >= by)
        else:
            # affine tails cross once; beyond the crossing the slopes decide
            n_star = (by - bx) / (ax - ay)
            if n_star > length:
                length = int(n_star) + 1
            pick_x = (ax < ay) if op == "meet" else (ax > ay)
        tail = Tail(ax, bx) if pick_x else Tail(ay, by)
    fn = _OPS[op]
    pre = [fn(x.eval(n), y.eval(n)) for n in range(1, length + 1)]
    return TailSeq.make(pre, tail)


def _tail_abs(x: TailSeq) -> TailSeq:
    a, b = x.tail.a, x.tail.b
    length = len(x.prefix)
    if a == 0:
        tail = Tail(Fraction(0), abs(b))
    else:
        root = -b / a
        if root > length:
            length = int(root) + 1
        # beyond the root the sign of a*n+b matches the sign of a
        tail = Tail(a, b) if a > 0 else Tail(-a, -b)
    pre = [abs(x.eval(n)) for n in range(1, length + 1)]
    return TailSeq.make(pre, tail)


# ---------------------------------------------------------------------------
# Finite direct sums of step functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirectSumElem:
    """Finitely supported map component-id -> StepFn; absent ids are zero.

    Canonical form: stored components are nonzero.  Component ids are plain
    strings without ':' or ';' (they appear in the text serialization).
    """

    components: tuple[tuple[str, StepFn], ...]

    KIND = "dsum"

    @staticmethod
    def make(components: Mapping[str, StepFn] | Iterable[tuple[str, StepFn]]) -> "DirectSumElem":
        items = dict(components)
        cleaned = []
        for key in sorted(items):
            if ":" in key or ";" in key or " " in key:
                raise ValueError(f"bad component id {key!r}")
            f = items[key]
            if not isinstance(f, StepFn):
                raise KindMismatch("direct-sum components must be step functions")
            if not f.is_zero():
                cleaned.append((key, f))
        return DirectSumElem(tuple(cleaned))

    @staticmethod
    def zero() -> "DirectSumElem":
        return DirectSumElem.make({})

    def component(self, key: str) -> StepFn:
        for k, f in self.components:
            if k == key:
                return f
        return StepFn.zero()

    def keys(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.components)

    def is_zero(self) -> bool:
        return not self.components


def _dsum_combine(a: DirectSumElem, b: DirectSumElem, op: str) -> DirectSumElem:
    keys = sorted(set(a.keys()) | set(b.keys()))
    return DirectSumElem.make(
        {k: _step_combine(a.component(k), b.component(k), _OPS[op]) for k in keys}
    )


# ---------------------------------------------------------------------------
# Generic lattice algebra
# ---------------------------------------------------------------------------

Element = Union[StepFn, PLFn, TailSeq, DirectSumElem]


def kind_of(a: Element) -> str:
    try:
        return a.KIND
    except AttributeError:
        raise KindMismatch(f"not a lattice element: {a!r}") from None


def combine(a: Element, b: Element, op: str) -> Element:
    """Pointwise meet/join/sum/diff of two elements of the same carrier kind."""
    if op not in _OPS:
        raise ValueError(f"unknown op {op!r}")
    ka, kb = kind_of(a), kind_of(b)
    if ka != kb:
        raise KindMismatch(f"cannot combine {ka} with {kb}")
    if ka == "step":
        return _step_combine(a, b, _OPS[op])
    if ka == "pl":
        return _pl_combine(a, b, op)
    if ka == "seq":
        return _tail_combine(a, b, op)
    return _dsum_combine(a, b, op)


def scale(alpha, a: Element) -> Element:
    alpha = frac(alpha)
    k = kind_of(a)
    if k == "step":
        return StepFn.make(a.breakpoints, [alpha * v for v in a.values])
    if k == "pl":
        return PLFn.make(a.nodes, [alpha * v for v in a.values])
    if k == "seq":
        return TailSeq.make(
            [alpha * v for v in a.prefix], Tail(alpha * a.tail.a, alpha * a.tail.b)
        )
    return DirectSumElem.make({key: scale(alpha, f) for key, f in a.components})


def abs_val(a: Element) -> Element:
    k = kind_of(a)
    if k == "step":
        return StepFn.make(a.breakpoints, [abs(v) for v in a.values])
    if k == "pl":
        return _pl_combine(a, scale(-1, a), "join")
    if k == "seq":
        return _tail_abs(a)
    return DirectSumElem.make({key: abs_val(f) for key, f in a.components})


def zero_like(kind_or_elem) -> Element:
    k = kind_or_elem if isinstance(kind_or_elem, str) else kind_of(kind_or_elem)
    return {"step": StepFn.zero, "pl": PLFn.zero, "seq": TailSeq.zero, "dsum": DirectSumElem.zero}[k]()


def leq(a: Element, b: Element) -> bool:
    """Exact pointwise/coordinatewise a <= b (via meet canonicality)."""
    return combine(a, b, "meet") == a


def is_nonnegative(a: Element) -> bool:
    k = kind_of(a)
    if k in ("step", "pl"):
        return all(v >= 0 for v in a.values)
    if k == "seq":
        if any(v < 0 for v in a.prefix):
            return False
        t = a.tail
        if t.kind == "zero":
            return True
        if t.kind == "const":
            return t.b >= 0
        return t.a > 0 and t.at(len(a.prefix) + 1) >= 0
    return all(is_nonnegative(f) for _, f in a.components)


def is_positive(a: Element) -> bool:
    """a >= 0 and a != 0."""
    return is_nonnegative(a) and not a.is_zero()


# ---------------------------------------------------------------------------
# Restriction to a region (step functions only)
# ---------------------------------------------------------------------------

Region = Sequence[tuple[Fraction, Fraction]]

FULL_REGION: tuple[tuple[Fraction, Fraction], ...] = ((Fraction(0), Fraction(1)),)


def normalize_region(region: Region) -> tuple[tuple[Fraction, Fraction], ...]:
    ivs = sorted((frac(lo), frac(hi)) for lo, hi in region)
    for lo, hi in ivs:
        if not (0 <= lo < hi <= 1):
            raise BadRegion(f"interval [{lo}, {hi}) not inside [0, 1]")
    for (_, hi), (lo2, _) in zip(ivs, ivs[1:]):
        if lo2 < hi:
            raise BadRegion("intervals overlap")
    return tuple(ivs)


def restrict(f: StepFn, region: Region) -> StepFn:
    """f * indicator(region): zero outside the given disjoint intervals."""
    if kind_of(f) != "step":
        raise KindMismatch("restrict is defined for step functions")
    ivs = normalize_region(region)
    cuts = sorted({Fraction(0), Fraction(1)} | set(f.breakpoints) | {t for iv in ivs for t in iv})
    vals = []
    for lo in cuts[:-1]:
        inside = any(a <= lo < b for a, b in ivs)
        vals.append(f.eval(lo) if inside else Fraction(0))
    return StepFn.make(cuts, vals)


# ---------------------------------------------------------------------------
# Grid evaluation (shared by oracles and sampling)
# ---------------------------------------------------------------------------

def eval_on_grid(f: Element, denom: int) -> list[Fraction]:
    """Values of a step/pl function at t = i/denom for i = 0..denom-1."""
    k = kind_of(f)
    if k not in ("step", "pl"):
        raise KindMismatch("grid evaluation needs a function carrier")
    return [f.eval(Fraction(i, denom)) for i in range(denom)]


# ---------------------------------------------------------------------------
# Canonical text serialization (bit-exact round trip)
# ---------------------------------------------------------------------------

def _fmt_list(xs: Iterable[Fraction]) -> str:
    return "[" + ",".join(frac_str(x) for x in xs) + "]"


def _parse_list(text: str) -> list[Fraction]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"bad list syntax: {text!r}")
    body = text[1:-1].strip()
    if not body:
        return []
    return [Fraction(tok) for tok in body.split(",")]


def to_text(a: Element) -> str:
    k = kind_of(a)
    if k == "step":
        return f"step {_fmt_list(a.breakpoints)} {_fmt_list(a.values)}"
    if k == "pl":
        return f"pl {_fmt_list(a.nodes)} {_fmt_list(a.values)}"
    if k == "seq":
        t = a.tail
        if t.kind == "zero":
            tail = "zero"
        elif t.kind == "const":
            tail = f"const {frac_str(t.b)}"
        else:
            tail = f"affine {frac_str(t.a)} {frac_str(t.b)}"
        return f"seq {_fmt_list(a.prefix)} {tail}"
    parts = "; ".join(f"{key}: {to_text(f)}" for key, f in a.components)
    return "dsum {" + parts + "}"


def parse_element(text: str) -> Element:
    text = text.strip()
    head, _, rest = text.partition(" ")
    if head == "step":
        bps_txt, vals_txt = rest.strip().split("] [")
        return StepFn.make(_parse_list(bps_txt + "]"), _parse_list("[" + vals_txt))
    if head == "pl":
        ns_txt, vs_txt = rest.strip().split("] [")
        return PLFn.make(_parse_list(ns_txt + "]"), _parse_list("[" + vs_txt))
    if head == "seq":
        rest = rest.strip()
        close = rest.index("]")
        prefix = _parse_list(rest[: close + 1])
        tail_txt = rest[close + 1 :].strip()
        toks = tail_txt.split()
        if toks[0] == "zero":
            tail = TAIL_ZERO
        elif toks[0] == "const":
            tail = Tail(Fraction(0), Fraction(toks[1]))
        elif toks[0] == "affine":
            tail = Tail(Fraction(toks[1]), Fraction(toks[2]))
        else:
            raise ValueError(f"bad tail {tail_txt!r}")
        return TailSeq.make(prefix, tail)
    if head == "dsum":
        body = rest.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"bad dsum syntax: {text!r}")
        inner = body[1:-1].strip()
        comps: dict[str, StepFn] = {}
        if inner:
            for chunk in inner.split("; "):
                key, _, ser = chunk.partition(": ")
                elem = parse_element(ser)
                if not isinstance(elem, StepFn):
                    raise KindMismatch("dsum components must be step functions")
                comps[key] = elem
        return DirectSumElem.make(comps)
    raise ValueError(f"unknown element kind in {text!r}")
