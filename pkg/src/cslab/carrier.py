"""Semigroups used as carriers: finite multiplication tables and two analytic families."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Sequence

import numpy as np


class CarrierError(ValueError):
    """Raised for malformed or invalid carrier descriptions."""


Element = Any  # int (finite index), tuple[Fraction, ...] (rat-add), float (nonneg-real-mul)


@dataclass(frozen=True)
class SweepGrid:
    """Encoded window and all ordered window pairs, precomputed once per carrier."""

    pairs: tuple[tuple[Element, Element], ...]
    x: np.ndarray
    y: np.ndarray
    xy: np.ndarray
    window: np.ndarray


class Carrier:
    """Base class. Subclasses are immutable after construction."""

    kind: str = ""
    dim: int = 0  # dimension of the coordinate space used by additive functions

    @property
    def window(self) -> tuple[Element, ...]:
        raise NotImplementedError

    def compose(self, x: Element, y: Element) -> Element:
        raise NotImplementedError

    def contains(self, x: Element) -> bool:
        raise NotImplementedError

    def encode(self, elements: Sequence[Element]) -> np.ndarray:
        """Numeric encoding consumed by vectorised evaluators."""
        raise NotImplementedError

    def coordinates(self, enc: np.ndarray) -> np.ndarray:
        """Coordinates (n, dim) on which additive functions are linear. Undefined points get 0."""
        raise NotImplementedError

    def element_json(self, x: Element) -> Any:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return False

    def check_element(self, x: Element) -> Element:
        if not self.contains(x):
            raise CarrierError(f"element {x!r} is not in the {self.kind} carrier")
        return x

    @cached_property
    def sweep(self) -> SweepGrid:
        w = list(self.window)
        pairs = tuple((x, y) for x in w for y in w)
        xs = [p[0] for p in pairs]
        ys = [p[1] for p in pairs]
        xys = [self.compose(x, y) for x, y in pairs]
        return SweepGrid(pairs, self.encode(xs), self.encode(ys), self.encode(xys), self.encode(w))

    @cached_property
    def fit_grid(self) -> tuple[list[Element], np.ndarray]:
        """Window together with all window products, deduplicated in first-seen order."""
        seen: dict[Any, Element] = {}
        for x in self.window:
            seen.setdefault(self._key(x), x)
        for x, y in self.sweep.pairs:
            z = self.compose(x, y)
            seen.setdefault(self._key(z), z)
        pts = list(seen.values())
        return pts, self.encode(pts)

    def _key(self, x: Element) -> Any:
        return x


@dataclass(frozen=True, eq=False)
class FiniteCarrier(Carrier):
    labels: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    window_idx: tuple[int, ...] = field(default=())

    kind = "finite"
    dim = 0

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise CarrierError("finite carrier needs at least one element")
        if len(set(self.labels)) != n:
            raise CarrierError("duplicate element labels")
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise CarrierError(f"table must be {n}x{n}")
        for r in self.table:
            for v in r:
                if not (0 <= v < n):
                    raise CarrierError(f"table entry {v} out of range")
        bad = associativity_witness(self.table)
        if bad is not None:
            i, j, k = bad
            raise CarrierError(
                "table is not associative: "
                f"({self.labels[i]}*{self.labels[j]})*{self.labels[k]} != "
                f"{self.labels[i]}*({self.labels[j]}*{self.labels[k]})"
            )
        if not self.window_idx:
            object.__setattr__(self, "window_idx", tuple(range(n)))
        if len(set(self.window_idx)) != len(self.window_idx):
            raise CarrierError("window has duplicates")
        for i in self.window_idx:
            if not (0 <= i < n):
                raise CarrierError(f"window element {i} outside carrier")

    @property
    def is_finite(self) -> bool:
        return True

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(range(self.size))

    @property
    def window(self) -> tuple[int, ...]:
        return self.window_idx

    def index(self, label: str | int) -> int:
        if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
            return self.check_element(int(label))
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise CarrierError(f"unknown element label {label!r}") from None

    def contains(self, x) -> bool:
        return isinstance(x, (int, np.integer)) and 0 <= int(x) < self.size

    def compose(self, x, y):
        self.check_element(x)
        self.check_element(y)
        return self.table[x][y]

    def encode(self, elements):
        return np.asarray([int(e) for e in elements], dtype=int)

    def coordinates(self, enc):
        return np.zeros((len(enc), 0))

    def element_json(self, x):
        return self.labels[x]

    def to_json(self):
        out = {
            "kind": "finite",
            "elements": list(self.labels),
            "table": [[self.labels[v] for v in r] for r in self.table],
        }
        if self.window_idx != tuple(range(self.size)):
            out["window"] = [self.labels[i] for i in self.window_idx]
        return out


def associativity_witness(table: Sequence[Sequence[int]]) -> tuple[int, int, int] | None:
    """First triple (i, j, k) violating associativity, or None."""
    t = np.asarray(table, dtype=int)
    lhs = t[t[:, :, None], np.arange(len(t))[None, None, :]]  # (ij)k
    rhs = t[np.arange(len(t))[:, None, None], t[None, :, :]]  # i(jk)
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        return tuple(int(v) for v in bad[0])
    return None


def _frac(v: Any) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise CarrierError(f"not a rational: {v!r}")
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise CarrierError(f"not a rational: {v!r}") from None
    if isinstance(v, float):
        return Fraction(v)
    raise CarrierError(f"not a rational: {v!r}")


DEFAULT_RAT_WINDOW_2D = (
    (0, 0), (1, 0), (0, 1), ("1/2", "1/3"), (-1, "1/2"), ("1/3", "-2/3"),
    (1, 1), ("-1/2", "-1/2"), ("3/2", 0), (0, -1), ("2/3", "1/4"), ("-1/4", "3/4"),
)
DEFAULT_RAT_WINDOW_1D = (0, 1, -1, "1/2", "-1/2", "1/3", "3/2", "-3/4", 2, "-5/4", "2/3", "1/4")
DEFAULT_NONNEG_WINDOW = (0, 0.5, 1, 2, 3.25, 0.25, 1.5, 0.75, 2.5, 1.25, 0.4, 3)


@dataclass(frozen=True, eq=False)
class RatAddCarrier(Carrier):
    """(Q^dim, +) with exact rational elements."""

    dim: int = 2
    window_pts: tuple[tuple[Fraction, ...], ...] = ()

    kind = "rat-add"

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise CarrierError("rat-add dim must be a positive integer")
        pts = self.window_pts
        if not pts:
            if self.dim == 1:
                pts = tuple((v,) for v in DEFAULT_RAT_WINDOW_1D)
            elif self.dim == 2:
                pts = DEFAULT_RAT_WINDOW_2D
            else:
                rng = np.random.default_rng(self.dim)
                pts = tuple(tuple(Fraction(int(k), 4) for k in rng.integers(-6, 7, self.dim)) for _ in range(12))
                pts = ((0,) * self.dim,) + pts[1:]
        norm = []
        for p in pts:
            if not isinstance(p, (list, tuple)) or len(p) != self.dim:
                raise CarrierError(f"window element {p!r} outside carrier: expected {self.dim} rationals")
            norm.append(tuple(_frac(v) for v in p))
        if len(set(norm)) != len(norm):
            raise CarrierError("window has duplicates")
        object.__setattr__(self, "window_pts", tuple(norm))

    @property
    def window(self):
        return self.window_pts

    def contains(self, x) -> bool:
        return isinstance(x, tuple) and len(x) == self.dim and all(isinstance(v, Fraction) for v in x)

    def element(self, v) -> tuple[Fraction, ...]:
        """Coerce user input (scalar for dim 1, or sequence) to an element."""
        if not isinstance(v, (list, tuple)):
            v = (v,)
        if len(v) != self.dim:
            raise CarrierError(f"expected {self.dim} coordinates, got {v!r}")
        return tuple(_frac(a) for a in v)

    def compose(self, x, y):
        self.check_element(x)
        self.check_element(y)
        return tuple(a + b for a, b in zip(x, y))

    def encode(self, elements):
        if len(elements) == 0:
            return np.zeros((0, self.dim))
        return np.asarray([[float(v) for v in e] for e in elements], dtype=float)

    def coordinates(self, enc):
        return np.asarray(enc, dtype=float).reshape(-1, self.dim)

    def element_json(self, x):
        return [str(v) if v.denominator != 1 else int(v) for v in x]

    def to_json(self):
        return {"kind": "rat-add", "dim": self.dim, "window": [self.element_json(p) for p in self.window_pts]}


@dataclass(frozen=True, eq=False)
class NonnegRealMulCarrier(Carrier):
    """([0, inf), *) with floating point elements."""

    window_pts: tuple[float, ...] = ()

    kind = "nonneg-real-mul"
    dim = 1

    def __post_init__(self):
        pts = self.window_pts or DEFAULT_NONNEG_WINDOW
        norm = []
        for p in pts:
            try:
                v = float(_frac(p)) if isinstance(p, str) else float(p)
            except (TypeError, ValueError):
                raise CarrierError(f"window element {p!r} outside carrier") from None
            if not math.isfinite(v) or v < 0:
                raise CarrierError(f"window element {p!r} outside carrier: must be a finite value >= 0")
            norm.append(v)
        if len(set(norm)) != len(norm):
            raise CarrierError("window has duplicates")
        object.__setattr__(self, "window_pts", tuple(norm))

    @property
    def window(self):
        return self.window_pts

    def contains(self, x) -> bool:
        return isinstance(x, (float, int)) and not isinstance(x, bool) and math.isfinite(x) and x >= 0

    def element(self, v) -> float:
        return self.check_element(float(v))

    def compose(self, x, y):
        self.check_element(x)
        self.check_element(y)
        return float(x) * float(y)

    def encode(self, elements):
        return np.asarray([float(e) for e in elements], dtype=float)

    def coordinates(self, enc):
        enc = np.asarray(enc, dtype=float)
        out = np.zeros_like(enc)
        pos = enc > 0
        out[pos] = np.log(enc[pos])
        return out.reshape(-1, 1)

    def element_json(self, x):
        return float(x)

    def to_json(self):
        return {"kind": "nonneg-real-mul", "window": list(self.window_pts)}


def load_carrier(spec: dict) -> Carrier:
    """Build a carrier from its JSON description, checking every invariant."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise CarrierError("carrier spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind in ("finite", "finite-table"):
        labels = spec.get("elements")
        table = spec.get("table")
        if not isinstance(labels, list) or not isinstance(table, list):
            raise CarrierError("finite carrier needs 'elements' and 'table' lists")
        labels = tuple(str(v) for v in labels)
        pos = {lab: i for i, lab in enumerate(labels)}
        rows = []
        for r in table:
            if not isinstance(r, list):
                raise CarrierError("table rows must be lists")
            row = []
            for v in r:
                if str(v) not in pos:
                    raise CarrierError(f"table entry {v!r} is not an element label")
                row.append(pos[str(v)])
            rows.append(tuple(row))
        window = spec.get("window")
        widx: tuple[int, ...] = ()
        if window is not None:
            try:
                widx = tuple(pos[str(v)] for v in window)
            except KeyError as e:
                raise CarrierError(f"window element {e.args[0]!r} outside carrier") from None
        return FiniteCarrier(labels, tuple(rows), widx)
    if kind == "rat-add":
        dim = spec.get("dim", 1)
        if not isinstance(dim, int) or isinstance(dim, bool):
            raise CarrierError("rat-add 'dim' must be an integer")
        window = spec.get("window")
        pts = ()
        if window is not None:
            pts = tuple(tuple(p) if isinstance(p, list) else (p,) for p in window)
        return RatAddCarrier(dim, pts)
    if kind == "nonneg-real-mul":
        return NonnegRealMulCarrier(tuple(spec.get("window") or ()))
    raise CarrierError(f"unknown carrier kind {kind!r}")


def zmod_add(n: int) -> FiniteCarrier:
    labels = tuple(str(i) for i in range(n))
    return FiniteCarrier(labels, tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))


def mod2_mul() -> FiniteCarrier:
    return FiniteCarrier(("0", "1"), ((0, 0), (0, 1)))


def singleton() -> FiniteCarrier:
    return FiniteCarrier(("e",), ((0,),))


def rat_add(dim: int = 2) -> RatAddCarrier:
    return RatAddCarrier(dim)


def nonneg_real_mul() -> NonnegRealMulCarrier:
    return NonnegRealMulCarrier()


@dataclass(frozen=True)
class SquareVerdict:
    """Per-element decomposition x = x1^2 ... xn^2, or None when unreachable."""

    decompositions: dict
    builtin: bool = False

    @property
    def all_reachable(self) -> bool:
        return all(v is not None for v in self.decompositions.values())

    @property
    def unreachable(self) -> list:
        return [k for k, v in self.decompositions.items() if v is None]


def check_square_generated(c: Carrier, max_length: int | None = None) -> SquareVerdict:
    """Breadth-first closure of {x^2} under composition (finite) or the built-in verdict."""
    if isinstance(c, RatAddCarrier):
        return SquareVerdict({x: [tuple(v / 2 for v in x)] for x in c.window}, builtin=True)
    if isinstance(c, NonnegRealMulCarrier):
        return SquareVerdict({x: [math.sqrt(x)] for x in c.window}, builtin=True)
    assert isinstance(c, FiniteCarrier)
    if max_length is None:
        max_length = c.size
    if max_length < 1:
        raise ValueError("max_length must be positive")
    squares: dict[int, int] = {}
    for x in c.elements:
        squares.setdefault(c.table[x][x], x)
    reached: dict[int, list[int]] = {q: [r] for q, r in squares.items()}
    frontier = deque(reached)
    length = 1
    while frontier and length < max_length:
        length += 1
        nxt = deque()
        for z in frontier:
            for q, r in squares.items():
                w = c.table[z][q]
                if w not in reached:
                    reached[w] = reached[z] + [r]
                    nxt.append(w)
        frontier = nxt
    return SquareVerdict({x: reached.get(x) for x in c.elements})


def iter_window_triples(c: Carrier) -> Iterable[tuple[Element, Element, Element]]:
    w = c.elements if isinstance(c, FiniteCarrier) else c.window
    for x in w:
        for y in w:
            for z in w:
                yield x, y, z
