"""Complex functions on carriers: characters, additive functions and extension by zero."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

import numpy as np
import sympy

from .carrier import Carrier, CarrierError, FiniteCarrier, NonnegRealMulCarrier, RatAddCarrier

TOL_ENV = "CSLAB_TOL"


def default_tol() -> float:
    """Relative residual tolerance, overridable through the CSLAB_TOL environment variable."""
    raw = os.environ.get(TOL_ENV)
    if raw:
        try:
            v = float(raw)
        except ValueError:
            raise ValueError(f"{TOL_ENV} must be a float, got {raw!r}") from None
        if v > 0:
            return v
    return 1e-9


class FunctionError(ValueError):
    """Invalid construction of a function on a carrier."""


def _cvec(v, n: int | None = None) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=complex))
    if n is not None and arr.shape != (n,):
        raise FunctionError(f"expected a vector of length {n}, got shape {arr.shape}")
    return arr


# ---------------------------------------------------------------- characters


@dataclass(frozen=True, eq=False)
class Character:
    """A multiplicative function together with its null ideal.

    Forms: ``exp`` (rat-add, exp(b.x)), ``power`` (nonneg-real-mul, x**s with 0 -> 0),
    ``one`` (constant 1), ``zero`` and ``table`` (finite carriers).
    """

    carrier: Carrier
    form: str
    params: tuple
    angles: tuple | None = None  # exact table values: None for 0, Fraction t for exp(2 pi i t)

    @property
    def key(self) -> tuple:
        return (self.form, self.params)

    @property
    def is_zero(self) -> bool:
        if self.form == "zero":
            return True
        if self.form == "table":
            return all(v == 0 for v in self.params)
        return False

    def evaluate(self, enc: np.ndarray) -> np.ndarray:
        c = self.carrier
        if self.form == "exp":
            return np.exp(c.coordinates(enc) @ np.asarray(self.params, dtype=complex))
        if self.form == "power":
            x = np.asarray(enc, dtype=float)
            out = np.zeros(x.shape, dtype=complex)
            pos = x > 0
            out[pos] = np.exp(self.params[0] * np.log(x[pos]))
            return out
        if self.form == "one":
            return np.ones(len(enc), dtype=complex)
        if self.form == "zero":
            return np.zeros(len(enc), dtype=complex)
        if self.form == "table":
            return np.asarray(self.params, dtype=complex)[np.asarray(enc, dtype=int)]
        raise FunctionError(f"unknown character form {self.form!r}")

    def in_null_ideal(self, enc: np.ndarray) -> np.ndarray:
        """Exact membership test for I_chi."""
        if self.form == "power":
            return np.asarray(enc, dtype=float) == 0
        if self.form == "zero":
            return np.ones(len(enc), dtype=bool)
        if self.form == "table":
            return np.asarray(self.params, dtype=complex)[np.asarray(enc, dtype=int)] == 0
        return np.zeros(len(enc), dtype=bool)

    def __call__(self, x) -> complex:
        return complex(self.evaluate(self.carrier.encode([x]))[0])

    def null_ideal(self) -> list:
        """Window elements lying in I_chi (all elements for finite carriers)."""
        pts = self.carrier.elements if isinstance(self.carrier, FiniteCarrier) else self.carrier.window
        mask = self.in_null_ideal(self.carrier.encode(list(pts)))
        return [p for p, m in zip(pts, mask) if m]

    def as_function(self) -> "ComplexFn":
        return ComplexFn.from_nf(self.carrier, {self.key: Term.of(self, 1.0)} if not self.is_zero else {})

    def multiplicativity_residual(self) -> float:
        g = self.carrier.sweep
        return float(np.max(np.abs(self.evaluate(g.xy) - self.evaluate(g.x) * self.evaluate(g.y)), initial=0.0))

    def describe(self) -> dict:
        if self.form == "exp":
            return {"form": "exp", "b": [_cjson(v) for v in self.params]}
        if self.form == "power":
            return {"form": "power", "s": _cjson(self.params[0])}
        if self.form == "table":
            return {"form": "table", "values": [_cjson(v) for v in self.params]}
        return {"form": self.form}

    def __repr__(self) -> str:
        return f"Character({self.describe()})"

    # arithmetic lifts to ComplexFn
    def __add__(self, o):
        return self.as_function() + o

    __radd__ = __add__

    def __sub__(self, o):
        return self.as_function() - o

    def __rsub__(self, o):
        return o - self.as_function()

    def __mul__(self, s):
        return self.as_function() * s

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self.as_function() / s

    def __neg__(self):
        return -self.as_function()


def _cjson(z) -> Any:
    z = complex(z)
    if z.imag == 0:
        return z.real
    return [z.real, z.imag]


def analytic_character(c: Carrier, params: Any = None, *, form: str | None = None) -> Character:
    """exp(b.x) on rat-add; x**s (with 0 -> 0) or the all-ones character on nonneg-real-mul."""
    if isinstance(c, RatAddCarrier):
        if form not in (None, "exp"):
            raise FunctionError(f"rat-add characters have form 'exp', not {form!r}")
        b = _cvec(params if params is not None else np.zeros(c.dim), None)
        if b.shape == (1,) and c.dim > 1:
            raise FunctionError(f"expected {c.dim} exponent components")
        if b.shape != (c.dim,):
            raise FunctionError(f"expected {c.dim} exponent components, got {b.size}")
        if not np.all(np.isfinite(b)):
            raise FunctionError("exponent must be finite")
        return Character(c, "exp", tuple(complex(v) for v in b))
    if isinstance(c, NonnegRealMulCarrier):
        if form == "one":
            return Character(c, "one", ())
        if form == "zero":
            return Character(c, "zero", ())
        if form not in (None, "power"):
            raise FunctionError(f"unknown nonneg-real-mul character form {form!r}")
        v = np.ravel(np.asarray(params if params is not None else 0, dtype=complex))
        if v.size != 1:
            raise FunctionError("a power character takes one exponent")
        s = complex(v[0])
        if not (math.isfinite(s.real) and math.isfinite(s.imag)):
            raise FunctionError("exponent must be finite")
        return Character(c, "power", (s,))
    raise FunctionError("analytic characters need a rat-add or nonneg-real-mul carrier")


def table_character(c: FiniteCarrier, values: Sequence[complex], tol: float = 1e-9) -> Character:
    vals = tuple(complex(v) for v in values)
    if len(vals) != c.size:
        raise FunctionError(f"need {c.size} values")
    ch = Character(c, "table", vals)
    t = np.asarray(c.table)
    v = np.asarray(vals)
    if np.max(np.abs(v[t] - v[:, None] * v[None, :])) > tol:
        raise FunctionError("values are not multiplicative")
    return ch


def _element_cycle(c: FiniteCarrier, x: int) -> tuple[int, int]:
    """Index k and period p with x^(k+p) = x^k."""
    seen: dict[int, int] = {}
    cur, n = x, 1
    while cur not in seen:
        seen[cur] = n
        cur = c.table[cur][x]
        n += 1
    k = seen[cur]
    return k, n - k


def enumerate_characters(c: Carrier) -> list[Character]:
    """All multiplicative maps of a finite carrier, zero map included, found exactly.

    Each value is 0 or a p-th root of unity where p is the element's period;
    roots of unity are tracked as exact angles so the search has no rounding.
    """
    if not isinstance(c, FiniteCarrier):
        raise FunctionError("enumerate_characters needs a finite carrier")
    n = c.size
    cand = []
    for x in range(n):
        _, p = _element_cycle(c, x)
        cand.append([None] + [Fraction(j, p) for j in range(p)])

    def mul(a, b):
        if a is None or b is None:
            return None
        return (a + b) % 1

    t = c.table
    assign: list = [0] * n
    done = [False] * n
    out: list[tuple] = []

    def consistent(e: int) -> bool:
        # every product whose operands and result are now all assigned, with e among them
        for a in range(n):
            if not done[a]:
                continue
            for b in range(n):
                k = t[a][b]
                if done[b] and done[k] and e in (a, b, k) and mul(assign[a], assign[b]) != assign[k]:
                    return False
        return True

    def rec(e: int):
        if e == n:
            out.append(tuple(assign))
            return
        for v in cand[e]:
            assign[e] = v
            done[e] = True
            if consistent(e):
                rec(e + 1)
            done[e] = False

    rec(0)
    chars = []
    for ang in out:
        vals = tuple(0j if a is None else complex(np.exp(2j * np.pi * float(a))) for a in ang)
        # snap to exact values where cheap
        vals = tuple(complex(round(v.real, 15), round(v.imag, 15)) for v in vals)
        chars.append(Character(c, "table", vals, angles=ang))
    return chars


# ---------------------------------------------------------------- additive functions


@dataclass(frozen=True)
class Poly:
    """Polynomial const + lin.u + u^T quad u in the carrier coordinates."""

    const: complex
    lin: np.ndarray
    quad: np.ndarray

    @staticmethod
    def zero(dim: int) -> "Poly":
        return Poly(0j, np.zeros(dim, complex), np.zeros((dim, dim), complex))

    @property
    def dim(self) -> int:
        return len(self.lin)

    @property
    def is_affine_constant(self) -> bool:
        return not (np.any(self.lin != 0) or np.any(self.quad != 0))

    def __add__(self, o):
        o = _as_poly(o, self.dim)
        return Poly(self.const + o.const, self.lin + o.lin, self.quad + o.quad)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-self.const, -self.lin, -self.quad)

    def __sub__(self, o):
        return self + (-_as_poly(o, self.dim))

    def __rsub__(self, o):
        return _as_poly(o, self.dim) - self

    def __mul__(self, s):
        if isinstance(s, (AdditiveFn, Poly)):
            a, b = self, _as_poly(s, self.dim)
            if not (a.is_affine_constant or b.is_affine_constant) and (np.any(a.quad) or np.any(b.quad)):
                raise FunctionError("degree above 2 is not representable")
            lin = a.const * b.lin + b.const * a.lin
            quad = a.const * b.quad + b.const * a.quad + 0.5 * (np.outer(a.lin, b.lin) + np.outer(b.lin, a.lin))
            return Poly(a.const * b.const, lin, quad)
        s = complex(s)
        return Poly(self.const * s, self.lin * s, self.quad * s)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (1 / complex(s))

    def __pow__(self, k: int):
        if k != 2:
            raise FunctionError("only squares are supported")
        return self * self

    def evaluate(self, u: np.ndarray) -> np.ndarray:
        return self.const + u @ self.lin + np.einsum("ni,ij,nj->n", u, self.quad, u)


def _as_poly(o, dim: int) -> Poly:
    if isinstance(o, Poly):
        return o
    if isinstance(o, AdditiveFn):
        return o.poly
    if isinstance(o, (int, float, complex, np.number)):
        return Poly(complex(o), np.zeros(dim, complex), np.zeros((dim, dim), complex))
    raise FunctionError(f"cannot treat {type(o).__name__} as a polynomial in additive functions")


@dataclass(frozen=True, eq=False)
class AdditiveFn:
    """An additive function on a subsemigroup of a carrier.

    Analytic carriers: ``alpha`` gives a(x) = alpha.x (rat-add, domain S) or
    alpha*ln x (nonneg-real-mul, domain (0, inf)). Finite carriers: ``values``
    over an explicit domain of element indices.
    """

    carrier: Carrier
    alpha: np.ndarray | None = None
    values: dict | None = None

    @property
    def is_analytic(self) -> bool:
        return self.alpha is not None

    @property
    def poly(self) -> Poly:
        if self.alpha is None:
            raise FunctionError("table additive functions have no coordinate form")
        d = self.carrier.dim
        return Poly(0j, np.asarray(self.alpha, complex), np.zeros((d, d), complex))

    @property
    def is_zero(self) -> bool:
        if self.alpha is not None:
            return not np.any(self.alpha != 0)
        return all(v == 0 for v in self.values.values())

    def in_domain(self, enc: np.ndarray) -> np.ndarray:
        c = self.carrier
        if isinstance(c, NonnegRealMulCarrier):
            return np.asarray(enc, dtype=float) > 0
        if isinstance(c, FiniteCarrier):
            return np.isin(np.asarray(enc, dtype=int), list(self.values))
        return np.ones(len(enc), dtype=bool)

    def evaluate(self, enc: np.ndarray) -> np.ndarray:
        """Values on the domain, nan elsewhere."""
        dom = self.in_domain(enc)
        out = np.full(len(enc), np.nan + 0j)
        if self.alpha is not None:
            out[dom] = (self.carrier.coordinates(enc) @ np.asarray(self.alpha, complex))[dom]
        else:
            idx = np.asarray(enc, dtype=int)
            for i in np.nonzero(dom)[0]:
                out[i] = self.values[int(idx[i])]
        return out

    def __call__(self, x) -> complex:
        return complex(self.evaluate(self.carrier.encode([x]))[0])

    def domain_window(self) -> list:
        pts = self.carrier.elements if isinstance(self.carrier, FiniteCarrier) else self.carrier.window
        mask = self.in_domain(self.carrier.encode(list(pts)))
        return [p for p, m in zip(pts, mask) if m]

    def additivity_residual(self) -> float:
        g = self.carrier.sweep
        ok = self.in_domain(g.x) & self.in_domain(g.y)
        if not np.any(ok):
            return 0.0
        r = self.evaluate(g.xy[ok]) - self.evaluate(g.x[ok]) - self.evaluate(g.y[ok])
        return float(np.max(np.abs(r)))

    def _same(self, o: "AdditiveFn"):
        if o.carrier is not self.carrier:
            raise FunctionError("additive functions live on different carriers")

    def __add__(self, o):
        if isinstance(o, AdditiveFn) and self.alpha is not None and o.alpha is not None:
            self._same(o)
            return AdditiveFn(self.carrier, self.alpha + o.alpha)
        return self.poly + o

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, s):
        if isinstance(s, (AdditiveFn, Poly)):
            return self.poly * s
        s = complex(s)
        if self.alpha is not None:
            return AdditiveFn(self.carrier, self.alpha * s)
        return AdditiveFn(self.carrier, values={k: v * s for k, v in self.values.items()})

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (1 / complex(s))

    def __pow__(self, k: int):
        return self.poly**k

    def describe(self) -> dict:
        if self.alpha is not None:
            form = "log" if isinstance(self.carrier, NonnegRealMulCarrier) else "linear"
            return {"form": form, "alpha": [_cjson(v) for v in self.alpha]}
        return {"form": "table", "values": {str(k): _cjson(v) for k, v in sorted(self.values.items())}}


def analytic_additive(c: Carrier, alpha: Any) -> AdditiveFn:
    """a(x) = alpha.x on rat-add, a(x) = alpha*ln x on (0, inf) for nonneg-real-mul."""
    if isinstance(c, RatAddCarrier):
        a = _cvec(alpha)
        if a.shape != (c.dim,):
            raise FunctionError(f"expected {c.dim} coefficients, got {a.size}")
        return AdditiveFn(c, a)
    if isinstance(c, NonnegRealMulCarrier):
        a = _cvec(alpha)
        if a.shape != (1,):
            raise FunctionError("nonneg-real-mul additive functions take one coefficient")
        return AdditiveFn(c, a)
    raise FunctionError("analytic additive functions need a rat-add or nonneg-real-mul carrier")


@dataclass(frozen=True)
class AdditiveBasis:
    dimension: int
    basis: tuple[AdditiveFn, ...]


def solve_additive_basis(c: Carrier, domain: Iterable | None = None) -> AdditiveBasis:
    """Basis of additive functions on a subsemigroup.

    Finite carriers: exact nullspace of a(xy) - a(x) - a(y) = 0 over all domain pairs.
    Analytic carriers: the built-in coordinate functionals, checked on the window.
    """
    if isinstance(c, RatAddCarrier):
        basis = tuple(analytic_additive(c, np.eye(c.dim)[i]) for i in range(c.dim))
        return AdditiveBasis(c.dim, basis)
    if isinstance(c, NonnegRealMulCarrier):
        if domain == "all":
            return AdditiveBasis(0, ())
        return AdditiveBasis(1, (analytic_additive(c, [1.0]),))
    assert isinstance(c, FiniteCarrier)
    dom = sorted(set(c.elements if domain is None else (c.index(v) for v in domain)))
    pos = {x: i for i, x in enumerate(dom)}
    for x in dom:
        for y in dom:
            if c.table[x][y] not in pos:
                raise CarrierError(
                    f"domain is not closed: {c.labels[x]}*{c.labels[y]} = {c.labels[c.table[x][y]]} lies outside"
                )
    if not dom:
        return AdditiveBasis(0, ())
    rows = []
    for x in dom:
        for y in dom:
            r = [0] * len(dom)
            r[pos[c.table[x][y]]] += 1
            r[pos[x]] -= 1
            r[pos[y]] -= 1
            rows.append(r)
    ns = sympy.Matrix(rows).nullspace()
    basis = tuple(AdditiveFn(c, values={x: complex(v[pos[x]]) for x in dom}) for v in ns)
    return AdditiveBasis(len(basis), basis)


# ---------------------------------------------------------------- complex functions


@dataclass
class Term:
    """chi * (const + lin.u + u^T quad u), extended by zero on I_chi."""

    chi: Character
    const: complex
    lin: np.ndarray
    quad: np.ndarray

    @staticmethod
    def of(chi: Character, const: complex = 0, poly: Poly | None = None) -> "Term":
        d = chi.carrier.dim
        p = poly if poly is not None else Poly.zero(d)
        return Term(chi, complex(const) + p.const, p.lin.astype(complex), p.quad.astype(complex))

    def copy(self) -> "Term":
        return Term(self.chi, self.const, self.lin.copy(), self.quad.copy())

    def scaled(self, s: complex) -> "Term":
        return Term(self.chi, self.const * s, self.lin * s, self.quad * s)

    @property
    def poly(self) -> Poly:
        return Poly(self.const, self.lin, self.quad)

    @property
    def is_null(self) -> bool:
        return self.const == 0 and not np.any(self.lin) and not np.any(self.quad)


class ComplexFn:
    """A map from carrier elements to complex numbers.

    Either backed by a closed-form descriptor (a sum of extended polynomial terms
    per character) or by an arbitrary vectorised evaluator on encoded elements.
    """

    def __init__(self, carrier: Carrier, *, nf: dict | None = None, fn: Callable | None = None, name: str = ""):
        if (nf is None) == (fn is None):
            raise FunctionError("give exactly one of nf or fn")
        self.carrier = carrier
        self.nf = nf
        self._fn = fn
        self.name = name

    @staticmethod
    def from_nf(carrier: Carrier, nf: dict, name: str = "") -> "ComplexFn":
        return ComplexFn(carrier, nf={k: v for k, v in nf.items() if not v.is_null}, name=name)

    @staticmethod
    def zero(carrier: Carrier) -> "ComplexFn":
        return ComplexFn(carrier, nf={})

    @staticmethod
    def constant(carrier: Carrier, value: complex) -> "ComplexFn":
        v = complex(value)
        return ComplexFn(carrier, fn=lambda enc: np.full(len(enc), v, dtype=complex), name=f"const {v}")

    @staticmethod
    def from_table(carrier: FiniteCarrier, values: Sequence[complex]) -> "ComplexFn":
        vals = np.asarray([complex(v) for v in values])
        if len(vals) != carrier.size:
            raise FunctionError(f"need {carrier.size} values")
        return ComplexFn(carrier, fn=lambda enc: vals[np.asarray(enc, dtype=int)])

    @staticmethod
    def from_callable(carrier: Carrier, f: Callable[[Any], complex]) -> "ComplexFn":
        """Wrap a scalar function of one encoded element."""

        def ev(enc):
            return np.asarray([complex(f(e)) for e in enc], dtype=complex)

        return ComplexFn(carrier, fn=ev)

    def evaluate(self, enc: np.ndarray) -> np.ndarray:
        if self.nf is None:
            return np.asarray(self._fn(enc), dtype=complex)
        n = len(enc)
        out = np.zeros(n, dtype=complex)
        if not self.nf:
            return out
        u = self.carrier.coordinates(enc)
        for t in self.nf.values():
            v = t.chi.evaluate(enc)
            if t.chi.carrier.dim:
                p = t.const + u @ t.lin + np.einsum("ni,ij,nj->n", u, t.quad, u)
            else:
                p = t.const
            mask = ~t.chi.in_null_ideal(enc)
            out = out + np.where(mask, v * p, 0)
        return out

    def __call__(self, x) -> complex:
        return complex(self.evaluate(self.carrier.encode([x]))[0])

    @property
    def characters(self) -> list[Character]:
        return [t.chi for t in (self.nf or {}).values()]

    # algebra -------------------------------------------------------
    def _lift(self, o) -> "ComplexFn":
        if isinstance(o, ComplexFn):
            if o.carrier is not self.carrier:
                raise FunctionError("functions live on different carriers")
            return o
        if isinstance(o, Character):
            return o.as_function()
        if isinstance(o, (int, float, complex)) and o == 0:
            return ComplexFn.zero(self.carrier)
        raise FunctionError(f"cannot add {type(o).__name__} to a function; use characters for constants")

    def __add__(self, o):
        o = self._lift(o)
        if self.nf is not None and o.nf is not None:
            nf = {k: t.copy() for k, t in self.nf.items()}
            for k, t in o.nf.items():
                if k in nf:
                    a = nf[k]
                    nf[k] = Term(a.chi, a.const + t.const, a.lin + t.lin, a.quad + t.quad)
                else:
                    nf[k] = t.copy()
            return ComplexFn.from_nf(self.carrier, nf)
        a, b = self, o
        return ComplexFn(self.carrier, fn=lambda enc: a.evaluate(enc) + b.evaluate(enc))

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, s):
        if isinstance(s, (ComplexFn, Character)):
            raise FunctionError("pointwise products are not closed-form; evaluate instead")
        s = complex(s)
        if self.nf is not None:
            return ComplexFn.from_nf(self.carrier, {k: t.scaled(s) for k, t in self.nf.items()})
        a = self
        return ComplexFn(self.carrier, fn=lambda enc: s * a.evaluate(enc))

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (1 / complex(s))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.evaluate(self.carrier.sweep.window)), initial=0.0))


def psi_extend(chi: Character, phi) -> ComplexFn:
    """Extension by zero: chi*phi on S minus I_chi, and 0 on I_chi.

    ``phi`` may be a number, an AdditiveFn, a Poly in additive functions, or a
    vectorised callable on encoded elements.
    """
    c = chi.carrier
    if chi.is_zero:
        return ComplexFn.zero(c)
    pts = c.elements if isinstance(c, FiniteCarrier) else c.window
    enc = c.encode(list(pts))
    off = ~chi.in_null_ideal(enc)
    if isinstance(phi, (int, float, complex)):
        phi = Poly.zero(c.dim) + phi
    if isinstance(phi, AdditiveFn) and phi.is_analytic:
        phi = phi.poly
    if isinstance(phi, Poly):
        if not phi.is_affine_constant and isinstance(c, NonnegRealMulCarrier) and np.any(off & (enc == 0)):
            raise FunctionError("phi is undefined at window element 0, which lies outside I_chi")
        return ComplexFn.from_nf(c, {chi.key: Term.of(chi, 0, phi)})
    if isinstance(phi, AdditiveFn):
        dom = phi.in_domain(enc)
        bad = [p for p, o, d in zip(pts, off, dom) if o and not d]
        if bad:
            raise FunctionError(f"phi is undefined at {bad[0]!r}, which lies outside I_chi")
        fphi = phi.evaluate
    elif callable(phi):
        fphi = phi
        vals = np.asarray(fphi(enc[off]), dtype=complex) if np.any(off) else np.zeros(0)
        if not np.all(np.isfinite(vals)):
            raise FunctionError("phi is undefined at some window element outside I_chi")
    else:
        raise FunctionError(f"unsupported phi of type {type(phi).__name__}")

    def ev(e):
        mask = ~chi.in_null_ideal(e)
        out = np.zeros(len(e), dtype=complex)
        if np.any(mask):
            out[mask] = chi.evaluate(e[mask]) * np.asarray(fphi(e[mask]), dtype=complex)
        return out

    return ComplexFn(c, fn=ev)


@dataclass(frozen=True)
class IndependenceVerdict:
    independent: bool
    witness: tuple | None
    minor: float
    scale: float

    def __bool__(self) -> bool:
        return self.independent


def linear_independence(f: ComplexFn, h: ComplexFn, tol: float | None = None) -> IndependenceVerdict:
    """Compare the largest 2x2 minor f(x)h(y) - f(y)h(x) over window pairs with tol * scale."""
    tol = default_tol() if tol is None else tol
    g = f.carrier.sweep
    fw = f.evaluate(g.window)
    hw = h.evaluate(g.window)
    scale = float(np.max(np.abs(fw), initial=0.0) * np.max(np.abs(hw), initial=0.0))
    m = np.abs(np.outer(fw, hw) - np.outer(hw, fw))
    k = int(np.argmax(m))
    best = float(m.flat[k])
    if scale == 0 or best <= tol * scale:
        return IndependenceVerdict(False, None, best, scale)
    w = f.carrier.window
    i, j = divmod(k, len(w))
    return IndependenceVerdict(True, (w[i], w[j]), best, scale)


def law_residual_membership(f: ComplexFn, g: ComplexFn) -> float:
    """max |f(xy) - f(x)g(y) - g(x)f(y)| over window pairs; f is in S_g iff this is within tolerance."""
    s = f.carrier.sweep
    r = f.evaluate(s.xy) - f.evaluate(s.x) * g.evaluate(s.y) - g.evaluate(s.x) * f.evaluate(s.y)
    return float(np.max(np.abs(r), initial=0.0))
