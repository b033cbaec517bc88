"""Brute-force checkers for the auxiliary lemmas on characters, additive functions and Psi.

Each oracle tests a conditional statement on a finite window: the hypothesis is
measured first (on the window together with all window products, the points
the proofs actually use) and, when it holds to ``TOL`` relative, the conclusion
is measured on the window. A failed hypothesis gives ``not-applicable`` with
its residual; a failed conclusion gives ``counterexample`` with the witness.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from .carrier import (
    Carrier,
    FiniteCarrier,
    NonnegRealMulCarrier,
    RatAddCarrier,
    load_carrier,
    mod2_mul,
    nonneg_real_mul,
    rat_add,
    zmod_add,
)
from .funcspace import (
    AdditiveFn,
    Character,
    ComplexFn,
    analytic_additive,
    analytic_character,
    enumerate_characters,
    law_residual_membership,
    psi_extend,
    solve_additive_basis,
)

TOL = 1e-9
SUITES = ("lemma31", "lemma32", "prop33", "prop34")
DEFAULT_DRAWS = 10_000


class OracleError(ValueError):
    pass


@dataclass
class OracleVerdict:
    oracle: str
    status: str  # holds | not-applicable | counterexample
    checked_count: int
    hypothesis_residual: float | None = None
    conclusion_residual: float | None = None
    counterexample: dict | None = None
    detail: str = ""

    @property
    def holds(self) -> bool:
        """False only when a counterexample was found."""
        return self.status != "counterexample"

    @property
    def applicable(self) -> bool:
        return self.status != "not-applicable"

    def to_json(self) -> dict:
        return {
            "oracle": self.oracle,
            "status": self.status,
            "holds": self.holds,
            "checked_count": self.checked_count,
            "hypothesis_residual": self.hypothesis_residual,
            "conclusion_residual": self.conclusion_residual,
            "counterexample": self.counterexample,
            "detail": self.detail,
        }


def _na(name: str, count: int, hyp: float | None, why: str) -> OracleVerdict:
    return OracleVerdict(name, "not-applicable", count, hyp, None, None, why)


def _conclude(name, count, hyp, concl, witness: Callable[[], dict], detail="") -> OracleVerdict:
    if concl <= TOL:
        return OracleVerdict(name, "holds", count, hyp, concl, None, detail)
    return OracleVerdict(name, "counterexample", count, hyp, concl, witness(), detail)


# ------------------------------------------------------------------ subsets


@dataclass(frozen=True)
class Subset:
    """A subset of a carrier given by a membership predicate."""

    name: str
    pred: Callable[[Any], bool]
    spec: dict = field(default_factory=dict)

    def mask(self, pts) -> np.ndarray:
        return np.array([bool(self.pred(p)) for p in pts], dtype=bool)


def subset_all() -> Subset:
    return Subset("S", lambda x: True, {"kind": "all"})


def subset_elements(c: Carrier, elements) -> Subset:
    if isinstance(c, FiniteCarrier):
        idx = frozenset(c.index(e) for e in elements)
    else:
        idx = frozenset(c.element(e) for e in elements)
    labels = [c.element_json(x) for x in sorted(idx)]
    return Subset("{" + ",".join(map(str, labels)) + "}", lambda x: x in idx, {"kind": "elements", "elements": labels})


def subset_from_json(c: Carrier, spec: dict) -> Subset:
    kind = spec.get("kind")
    if kind == "all":
        return subset_all()
    if kind == "elements":
        return subset_elements(c, spec["elements"])
    if kind == "positive":
        if isinstance(c, NonnegRealMulCarrier):
            return Subset("(0,inf)", lambda x: x > 0, spec)
        if isinstance(c, RatAddCarrier):
            return Subset("positive orthant", lambda x: all(v >= 0 for v in x) and any(v > 0 for v in x), spec)
    if kind == "interval" and isinstance(c, NonnegRealMulCarrier):
        lo, hi = float(spec["lo"]), float(spec["hi"])
        return Subset(f"[{lo},{hi}]", lambda x: lo <= x <= hi, spec)
    raise OracleError(f"unsupported subset {spec!r} on {c.kind}")


def _points(c: Carrier) -> tuple[list, np.ndarray]:
    """Hypothesis points: window and window products (all elements for finite carriers)."""
    if isinstance(c, FiniteCarrier):
        pts = list(c.elements)
        return pts, c.encode(pts)
    return c.fit_grid


def _window(c: Carrier) -> tuple[list, np.ndarray]:
    pts = list(c.elements) if isinstance(c, FiniteCarrier) else list(c.window)
    return pts, c.encode(pts)


def is_subsemigroup(c: Carrier, T: Subset) -> tuple[bool, tuple | None]:
    pts, _ = _window(c)
    inside = [x for x in pts if T.pred(x)]
    for x in inside:
        for y in inside:
            if not T.pred(c.compose(x, y)):
                return False, (x, y)
    return True, None


def is_ideal(c: Carrier, I: Subset) -> tuple[bool, tuple | None]:
    pts, _ = _window(c)
    for x in pts:
        if not I.pred(x):
            continue
        for s in pts:
            if not (I.pred(c.compose(x, s)) and I.pred(c.compose(s, x))):
                return False, (x, s)
    return True, None


def _rel(diff: np.ndarray, *terms: np.ndarray) -> float:
    d = float(np.max(np.abs(diff), initial=0.0))
    if d == 0:
        return 0.0
    scale = max((float(np.max(np.abs(t), initial=0.0)) for t in terms), default=0.0)
    return d / scale if scale > 0 else float("inf")


def _fmt(c: Carrier, x) -> Any:
    return c.element_json(x)


# ------------------------------------------------------------------ evaluation helpers


def _vals(fn, enc) -> np.ndarray:
    if isinstance(fn, (Character, ComplexFn, AdditiveFn)):
        return fn.evaluate(enc)
    return np.asarray(fn(enc), dtype=complex)


def _psi_vals(mu: Character, phi_vals: np.ndarray, enc) -> np.ndarray:
    """Psi_mu(phi) from the values of phi; raises when phi is undefined off the null ideal."""
    off = ~mu.in_null_ideal(enc)
    if np.any(off & ~np.isfinite(phi_vals)):
        raise OracleError("phi undefined on part of S minus I_mu")
    out = np.zeros(len(enc), complex)
    out[off] = mu.evaluate(enc)[off] * phi_vals[off]
    return out


def _span(cs: Sequence[complex], chis: Sequence[Character], enc) -> np.ndarray:
    out = np.zeros(len(enc), complex)
    for c, ch in zip(cs, chis):
        out = out + complex(c) * ch.evaluate(enc)
    return out


def _distinct(chars: Sequence[Character]) -> bool:
    from .families.build import characters_coincide

    return all(not characters_coincide(a, b) for i, a in enumerate(chars) for b in chars[i + 1 :])


# ------------------------------------------------------------------ lemma: additive vanishing on an ideal


def oracle_lemma31(c: Carrier, T: Subset, I: Subset, a) -> OracleVerdict:
    """If a is additive on the subsemigroup T and vanishes on T meet I (an ideal), then a vanishes on T."""
    name = "lemma31"
    ok, w = is_subsemigroup(c, T)
    if not ok:
        return _na(name, 0, None, f"T not closed: {_fmt(c, w[0])}*{_fmt(c, w[1])}")
    ok, w = is_ideal(c, I)
    if not ok:
        return _na(name, 0, None, f"I not an ideal: {_fmt(c, w[0])}*{_fmt(c, w[1])} leaves I")
    pts, enc = _points(c)
    tm, im = T.mask(pts), I.mask(pts)
    if not np.any(tm & im):
        return _na(name, 0, None, "T meet I is empty on the window")
    av = _vals(a, enc)
    if np.any(tm & ~np.isfinite(av)):
        return _na(name, 0, None, "a is undefined on part of T")
    # additivity on T, over window pairs inside T
    wp, wenc = _window(c)
    wt = [x for x in wp if T.pred(x)]
    pairs = [(x, y) for x in wt for y in wt]
    if pairs:
        xs = c.encode([p[0] for p in pairs])
        ys = c.encode([p[1] for p in pairs])
        xys = c.encode([c.compose(*p) for p in pairs])
        r = _vals(a, xys) - _vals(a, xs) - _vals(a, ys)
        add_res = _rel(r, _vals(a, xs), _vals(a, ys))
        if add_res > TOL:
            return _na(name, len(pairs), add_res, "a is not additive on T")
    scale = float(np.max(np.abs(av[tm]), initial=0.0))
    hyp = float(np.max(np.abs(av[tm & im]), initial=0.0)) / scale if scale > 0 else 0.0
    if hyp > TOL:
        return _na(name, int(np.sum(tm & im)), hyp, "a does not vanish on T meet I")
    wm = T.mask(wp)
    wv = _vals(a, wenc)[wm]
    ref = max(scale, 1.0)
    concl = float(np.max(np.abs(wv), initial=0.0)) / ref
    k = int(np.argmax(np.abs(wv))) if len(wv) else 0
    return _conclude(
        name, int(np.sum(wm)), hyp, concl,
        lambda: {"x": _fmt(c, [p for p, m in zip(wp, wm) if m][k]), "a(x)": [wv[k].real, wv[k].imag]},
    )


# ------------------------------------------------------------------ lemma: mu_i A_i in a character span


def oracle_lemma32(mus: Sequence[Character], As: Sequence, cs: Sequence[complex], chis: Sequence[Character]):
    """If sum mu_i A_i = sum c_j chi_j with distinct mu_i and A_i additive on S, then each mu_i A_i = 0."""
    name = "lemma32"
    if len(mus) != len(As) or len(cs) != len(chis):
        raise OracleError("ingredient lists have mismatched lengths")
    if not mus:
        raise OracleError("need at least one mu")
    c = mus[0].carrier
    if not _distinct(mus):
        return _na(name, 0, None, "the mu_i are not distinct")
    pts, enc = _points(c)
    terms = [m.evaluate(enc) * _vals(A, enc) for m, A in zip(mus, As)]
    if any(not np.all(np.isfinite(t)) for t in terms):
        return _na(name, 0, None, "some A_i is not defined on all of S")
    rhs = _span(cs, chis, enc)
    hyp = _rel(sum(terms) - rhs, rhs, *terms)
    if hyp > TOL:
        return _na(name, len(pts), hyp, "hypothesis fails")
    return _lemma32_conclusion(name, c, mus, As, cs, chis, hyp)


def _lemma32_conclusion(name, c, mus, As, cs, chis, hyp):
    wp, wenc = _window(c)
    terms = [m.evaluate(wenc) * _vals(A, wenc) for m, A in zip(mus, As)]
    ref = max(
        [float(np.max(np.abs(m.evaluate(wenc)))) * max(float(np.max(np.abs(_vals(A, wenc)))), 1.0) for m, A in zip(mus, As)]
        + [float(np.max(np.abs(complex(cj) * ch.evaluate(wenc)), initial=0.0)) for cj, ch in zip(cs, chis)]
        + [1e-300]
    )
    worst = [float(np.max(np.abs(t))) / ref for t in terms]
    i = int(np.argmax(worst))
    return _conclude(
        name, len(wp) * len(mus), hyp, worst[i],
        lambda: {"index": i, "x": _fmt(c, wp[int(np.argmax(np.abs(terms[i])))]), "mu_i A_i": worst[i] * ref},
    )


# ------------------------------------------------------------------ proposition on Psi


@dataclass
class Prop33Input:
    """Ingredients for the seven parts; each part reads the fields it needs."""

    mu: Character | None = None
    mu1: Character | None = None
    mu2: Character | None = None
    A: Any = None
    A1: Any = None
    A2: Any = None
    a: Any = None
    a1: Any = None
    cs: Sequence[complex] = ()
    chis: Sequence[Character] = ()
    T: Subset | None = None
    phi1: Any = None
    phi2: Any = None
    scalar: complex = 1.0


def _sq_vals(a1, a, enc) -> np.ndarray:
    va = _vals(a, enc)
    return _vals(a1, enc) + va * va


def _domain_ok(mu: Character, fns, enc) -> bool:
    off = ~mu.in_null_ideal(enc)
    return all(np.all(np.isfinite(_vals(f, enc)[off])) for f in fns)


def oracle_prop33(part: int, x: Prop33Input) -> OracleVerdict:
    name = f"prop33.{part}"
    if part == 1:
        return _p33_1(name, x)
    if part in (2, 3, 4, 5, 6):
        return {2: _p33_2, 3: _p33_3, 4: _p33_4, 5: _p33_5, 6: _p33_6}[part](name, x)
    if part == 7:
        return _p33_7(name, x)
    raise OracleError(f"prop33 has parts 1..7, got {part}")


def _nonzero_chars(*chars) -> bool:
    return all(ch is not None and not ch.is_zero for ch in chars)


def _p33_1(name, x: Prop33Input) -> OracleVerdict:
    """Psi_mu is linear, and Psi_mu(phi) = 0 forces phi = 0 off I_mu."""
    mu = x.mu
    if not _nonzero_chars(mu):
        return _na(name, 0, None, "mu must be a nonzero character")
    c = mu.carrier
    pts, enc = _window(c)
    if not _domain_ok(mu, [x.phi1, x.phi2], enc):
        return _na(name, 0, None, "phi undefined on part of S minus I_mu")
    off = ~mu.in_null_ideal(enc)
    p1 = np.where(off, _vals(x.phi1, enc), 0)
    p2 = np.where(off, _vals(x.phi2, enc), 0)
    lam = complex(x.scalar)
    lin = _psi_vals(mu, lam * p1 + p2, enc) - lam * _psi_vals(mu, p1, enc) - _psi_vals(mu, p2, enc)
    lin_res = _rel(lin, lam * _psi_vals(mu, p1, enc), _psi_vals(mu, p2, enc))
    if lin_res > TOL:
        return OracleVerdict(name, "counterexample", len(pts), None, lin_res, {"linearity": lin_res})
    psi1 = _psi_vals(mu, p1, enc)
    ref = max(float(np.max(np.abs(mu.evaluate(enc)))), 1.0) * max(float(np.max(np.abs(p1))), 1.0)
    hyp = float(np.max(np.abs(psi1))) / ref
    if hyp > TOL:
        return OracleVerdict(name, "holds", len(pts), hyp, lin_res, None,
                             "linearity checked; injectivity hypothesis Psi_mu(phi1)=0 not met")
    concl = float(np.max(np.abs(p1[off]), initial=0.0)) / max(float(np.max(np.abs(p1))), 1.0)
    return _conclude(name, len(pts), hyp, concl, lambda: {"phi1_off_ideal": concl})


def _p33_2(name, x: Prop33Input) -> OracleVerdict:
    """Psi_mu(A) = sum c_j chi_j on a subsemigroup T forces Psi_mu(A) = 0 on T."""
    mu, T = x.mu, x.T or subset_all()
    if not _nonzero_chars(mu):
        return _na(name, 0, None, "mu must be a nonzero character")
    c = mu.carrier
    ok, _ = is_subsemigroup(c, T)
    if not ok:
        return _na(name, 0, None, "T is not a subsemigroup")
    pts, enc = _points(c)
    tm = T.mask(pts)
    if not np.any(tm):
        return _na(name, 0, None, "T is empty on the window")
    try:
        lhs = _psi_vals(mu, _vals(x.A, enc), enc)
    except OracleError as e:
        return _na(name, 0, None, str(e))
    rhs = _span(x.cs, x.chis, enc)
    hyp = _rel((lhs - rhs)[tm], lhs[tm], rhs[tm])
    if hyp > TOL:
        return _na(name, int(np.sum(tm)), hyp, "hypothesis fails on T")
    wp, wenc = _window(c)
    wm = T.mask(wp)
    lw = _psi_vals(mu, _vals(x.A, wenc), wenc)[wm]
    ref = _ingredient_scale(mu, [x.A], wenc)
    concl = float(np.max(np.abs(lw), initial=0.0)) / ref
    return _conclude(name, int(np.sum(wm)), hyp, concl, lambda: {"max_psi_on_T": concl * ref})


def _ingredient_scale(mu: Character, fns, enc) -> float:
    off = ~mu.in_null_ideal(enc)
    m = float(np.max(np.abs(mu.evaluate(enc))))
    f = max([float(np.max(np.abs(_vals(g, enc)[off]), initial=0.0)) for g in fns] + [1.0])
    return max(m * f, 1e-300)


def _p33_3(name, x: Prop33Input) -> OracleVerdict:
    """Psi_mu1(A1) + Psi_mu2(A2) in a character span forces the sum to vanish."""
    mu1, mu2 = x.mu1, x.mu2
    if not _nonzero_chars(mu1, mu2):
        return _na(name, 0, None, "mu1, mu2 must be nonzero characters")
    if not _distinct([mu1, mu2]):
        return _na(name, 0, None, "mu1 = mu2")
    c = mu1.carrier
    pts, enc = _points(c)
    try:
        l1 = _psi_vals(mu1, _vals(x.A1, enc), enc)
        l2 = _psi_vals(mu2, _vals(x.A2, enc), enc)
    except OracleError as e:
        return _na(name, 0, None, str(e))
    rhs = _span(x.cs, x.chis, enc)
    hyp = _rel(l1 + l2 - rhs, l1, l2, rhs)
    if hyp > TOL:
        return _na(name, len(pts), hyp, "hypothesis fails")
    wp, wenc = _window(c)
    s = _psi_vals(mu1, _vals(x.A1, wenc), wenc) + _psi_vals(mu2, _vals(x.A2, wenc), wenc)
    ref = max(_ingredient_scale(mu1, [x.A1], wenc), _ingredient_scale(mu2, [x.A2], wenc))
    concl = float(np.max(np.abs(s))) / ref
    return _conclude(name, len(wp), hyp, concl, lambda: {"max_sum": concl * ref})


def _p33_4(name, x: Prop33Input) -> OracleVerdict:
    """Psi_mu(a1 + a^2) in a character span on (S minus I_mu) meet T forces a1 = a = 0 there."""
    mu, T = x.mu, x.T or subset_all()
    if not _nonzero_chars(mu):
        return _na(name, 0, None, "mu must be a nonzero character")
    c = mu.carrier
    ok, _ = is_subsemigroup(c, T)
    if not ok:
        return _na(name, 0, None, "T is not a subsemigroup")
    pts, enc = _points(c)
    dom = T.mask(pts) & ~mu.in_null_ideal(enc)
    if not np.any(dom):
        return _na(name, 0, None, "(S minus I_mu) meet T is empty on the window")
    if not _domain_ok(mu, [x.a, x.a1], enc):
        return _na(name, 0, None, "a or a1 undefined on part of S minus I_mu")
    lhs = _psi_vals(mu, _sq_vals(x.a1, x.a, enc), enc)
    rhs = _span(x.cs, x.chis, enc)
    hyp = _rel((lhs - rhs)[dom], lhs[dom], rhs[dom])
    if hyp > TOL:
        return _na(name, int(np.sum(dom)), hyp, "hypothesis fails")
    wp, wenc = _window(c)
    wd = T.mask(wp) & ~mu.in_null_ideal(wenc)
    va, va1 = _vals(x.a, wenc)[wd], _vals(x.a1, wenc)[wd]
    concl = max(float(np.max(np.abs(va), initial=0.0)), float(np.max(np.abs(va1), initial=0.0)))
    return _conclude(name, int(np.sum(wd)), hyp, concl, lambda: {"max_a": concl})


def _p33_5(name, x: Prop33Input) -> OracleVerdict:
    """Psi_mu1(a1 + a^2) + Psi_mu(A) in a character span forces a = 0."""
    mu, mu1 = x.mu, x.mu1
    if not _nonzero_chars(mu, mu1):
        return _na(name, 0, None, "mu, mu1 must be nonzero characters")
    c = mu.carrier
    pts, enc = _points(c)
    if not (_domain_ok(mu1, [x.a, x.a1], enc) and _domain_ok(mu, [x.A], enc)):
        return _na(name, 0, None, "an additive ingredient is undefined off its null ideal")
    l1 = _psi_vals(mu1, _sq_vals(x.a1, x.a, enc), enc)
    l2 = _psi_vals(mu, _vals(x.A, enc), enc)
    rhs = _span(x.cs, x.chis, enc)
    hyp = _rel(l1 + l2 - rhs, l1, l2, rhs)
    if hyp > TOL:
        return _na(name, len(pts), hyp, "hypothesis fails")
    return _a_vanishes(name, c, mu1, x.a, hyp)


def _a_vanishes(name, c, mu1, a, hyp) -> OracleVerdict:
    wp, wenc = _window(c)
    off = ~mu1.in_null_ideal(wenc)
    va = _vals(a, wenc)[off]
    concl = float(np.max(np.abs(va), initial=0.0))
    return _conclude(name, int(np.sum(off)), hyp, concl, lambda: {"max_a": concl})


def _p33_6(name, x: Prop33Input) -> OracleVerdict:
    """Psi_mu(A) = Psi_mu1(a1 + a^2) forces a = 0."""
    mu, mu1 = x.mu, x.mu1
    if not _nonzero_chars(mu, mu1):
        return _na(name, 0, None, "mu, mu1 must be nonzero characters")
    c = mu.carrier
    pts, enc = _points(c)
    if not (_domain_ok(mu1, [x.a, x.a1], enc) and _domain_ok(mu, [x.A], enc)):
        return _na(name, 0, None, "an additive ingredient is undefined off its null ideal")
    l = _psi_vals(mu, _vals(x.A, enc), enc)
    r = _psi_vals(mu1, _sq_vals(x.a1, x.a, enc), enc)
    hyp = _rel(l - r, l, r)
    if hyp > TOL:
        return _na(name, len(pts), hyp, "hypothesis fails")
    return _a_vanishes(name, c, mu1, x.a, hyp)


def _p33_7(name, x: Prop33Input) -> OracleVerdict:
    """a, A nonzero and Psi_mu1(a1 + a^2) = Psi_mu(A1 + A^2) force mu = mu1, a1 = A1 and a = +-A."""
    from .families.build import characters_coincide

    mu, mu1 = x.mu, x.mu1
    if not _nonzero_chars(mu, mu1):
        return _na(name, 0, None, "mu, mu1 must be nonzero characters")
    c = mu.carrier
    pts, enc = _points(c)
    if not (_domain_ok(mu1, [x.a, x.a1], enc) and _domain_ok(mu, [x.A, x.A1], enc)):
        return _na(name, 0, None, "an additive ingredient is undefined off its null ideal")
    va = _vals(x.a, enc)[~mu1.in_null_ideal(enc)]
    vA = _vals(x.A, enc)[~mu.in_null_ideal(enc)]
    if not np.any(np.abs(va) > TOL) or not np.any(np.abs(vA) > TOL):
        return _na(name, 0, None, "a and A must be nonzero")
    l = _psi_vals(mu1, _sq_vals(x.a1, x.a, enc), enc)
    r = _psi_vals(mu, _sq_vals(x.A1, x.A, enc), enc)
    hyp = _rel(l - r, l, r)
    if hyp > TOL:
        return _na(name, len(pts), hyp, "hypothesis fails")
    wp, wenc = _window(c)
    if not characters_coincide(mu, mu1):
        return OracleVerdict(name, "counterexample", len(wp), hyp, 1.0, {"mu": mu.describe(), "mu1": mu1.describe()})
    off = ~mu.in_null_ideal(wenc)
    a, A = _vals(x.a, wenc)[off], _vals(x.A, wenc)[off]
    a1, A1 = _vals(x.a1, wenc)[off], _vals(x.A1, wenc)[off]
    ref = max(float(np.max(np.abs(A), initial=0.0)), float(np.max(np.abs(A1), initial=0.0)), 1.0)
    d1 = float(np.max(np.abs(a1 - A1), initial=0.0)) / ref
    dp = float(np.max(np.abs(a - A), initial=0.0)) / ref
    dm = float(np.max(np.abs(a + A), initial=0.0)) / ref
    concl = max(d1, min(dp, dm))
    branch = "a=A" if dp <= dm else "a=-A"
    return _conclude(name, len(wp), hyp, concl, lambda: {"a1-A1": d1, "a-A": dp, "a+A": dm}, branch)


# ------------------------------------------------------------------ proposition on the sine-law solution spaces


def _member(f: ComplexFn, g: ComplexFn) -> float:
    s = f.carrier.sweep
    ref = max(
        float(np.max(np.abs(f.evaluate(s.xy)), initial=0.0)),
        float(np.max(np.abs(f.evaluate(s.x) * g.evaluate(s.y)), initial=0.0)),
        1e-300,
    )
    return law_residual_membership(f, g) / ref


def oracle_prop34(part: int, *, f1=None, f2=None, g=None, h=None, f=None, scalar=1.0,
                  chi=None, mu=None, a=None, A=None) -> OracleVerdict:
    name = f"prop34.{part}"
    if part == 1:
        c = f1.carrier
        hyp = max(_member(f1, g), _member(f2, g))
        if hyp > TOL:
            return _na(name, 0, hyp, "f1 or f2 is not in S_g")
        comb = f1 * complex(scalar) + f2
        concl = law_residual_membership(comb, g) / max(
            float(np.max(np.abs(f1.evaluate(c.sweep.xy)))) * max(abs(scalar), 1.0),
            float(np.max(np.abs(f2.evaluate(c.sweep.xy)))), 1e-300)
        return _conclude(name, len(c.sweep.pairs), hyp, concl, lambda: {"membership_residual": concl})
    if part == 2:
        c = f.carrier
        if f.max_abs() <= TOL:
            return _na(name, 0, None, "f vanishes on the window")
        hyp = max(_member(f, g), _member(f, h))
        if hyp > TOL:
            return _na(name, 0, hyp, "f is not in S_g meet S_h")
        pts, enc = _window(c)
        gv, hv = g.evaluate(enc), h.evaluate(enc)
        concl = _rel(gv - hv, gv, hv) if np.any(gv - hv) else 0.0
        return _conclude(name, len(pts), hyp, concl,
                         lambda: {"x": _fmt(c, pts[int(np.argmax(np.abs(gv - hv)))]), "g-h": concl})
    if part == 3:
        c = chi.carrier
        if not _nonzero_chars(chi, mu):
            return _na(name, 0, None, "chi, mu must be nonzero characters")
        pts, enc = _points(c)
        if not (_domain_ok(chi, [a], enc) and _domain_ok(mu, [A], enc)):
            return _na(name, 0, None, "an additive ingredient is undefined off its null ideal")
        va = _vals(a, enc)[~chi.in_null_ideal(enc)]
        if not np.any(np.abs(va) > TOL):
            return _na(name, 0, None, "a must be nonzero")
        l = _psi_vals(chi, _vals(a, enc), enc)
        r = _psi_vals(mu, _vals(A, enc), enc)
        hyp = _rel(l - r, l, r)
        if hyp > TOL:
            return _na(name, len(pts), hyp, "hypothesis fails")
        from .families.build import characters_coincide

        wp, wenc = _window(c)
        if not characters_coincide(chi, mu):
            return OracleVerdict(name, "counterexample", len(wp), hyp, 1.0, {"chi": chi.describe(), "mu": mu.describe()})
        off = ~chi.in_null_ideal(wenc)
        va, vA = _vals(a, wenc)[off], _vals(A, wenc)[off]
        concl = float(np.max(np.abs(va - vA), initial=0.0)) / max(float(np.max(np.abs(vA), initial=0.0)), 1.0)
        return _conclude(name, len(wp), hyp, concl, lambda: {"a-A": concl})
    raise OracleError(f"prop34 has parts 1..3, got {part}")


# ------------------------------------------------------------------ constructed corpus


def _tables_small() -> list[FiniteCarrier]:
    """Finite carriers of size <= 3 shipped with the package."""
    from .carrier import singleton

    semilattice = load_carrier({"kind": "finite-table", "elements": ["0", "1", "2"],
                                "table": [[0, 1, 2], [1, 1, 2], [2, 2, 2]]})
    return [singleton(), mod2_mul(), zmod_add(3), semilattice]


def _all_subsets(c: FiniteCarrier):
    n = c.size
    for mask in range(1, 1 << n):
        els = [i for i in range(n) if mask >> i & 1]
        yield subset_elements(c, [c.labels[i] for i in els])


def corpus_lemma31() -> list[tuple[str, OracleVerdict]]:
    out = []
    nn = nonneg_real_mul()
    zero_on_s = ComplexFn.zero(nn)
    out.append(("nonneg: T=(0,inf), I={0}", oracle_lemma31(nn, subset_from_json(nn, {"kind": "positive"}),
                                                            subset_elements(nn, [0.0]), analytic_additive(nn, [1.0]))))
    out.append(("nonneg: T=S, I={0}, a=0", oracle_lemma31(nn, subset_all(), subset_elements(nn, [0.0]), zero_on_s)))
    out.append(("nonneg: T=S, I={0}, a=ln", oracle_lemma31(nn, subset_all(), subset_elements(nn, [0.0]),
                                                            analytic_additive(nn, [1.0]))))
    m2 = mod2_mul()
    out.append(("({0,1},*): T=S, I={0}, a=0", oracle_lemma31(m2, subset_all(), subset_elements(m2, ["0"]),
                                                              ComplexFn.zero(m2))))
    r1 = rat_add(1)
    out.append(("rat-add: T=I=S, a=x", oracle_lemma31(r1, subset_all(), subset_all(), analytic_additive(r1, [1.0]))))
    out.append(("rat-add: T=I=S, a=0", oracle_lemma31(r1, subset_all(), subset_all(), analytic_additive(r1, [0.0]))))
    # exhaustive over subsemigroups and ideals of the small tables, with every additive function on T
    for c in _tables_small():
        count, worst = 0, "holds"
        for T in _all_subsets(c):
            if not is_subsemigroup(c, T)[0]:
                continue
            dom = [i for i in c.elements if T.pred(i)]
            basis = solve_additive_basis(c, dom)
            fns = [AdditiveFn(c, values=dict(b.values)) for b in basis.basis] or [AdditiveFn(c, values={i: 0j for i in dom})]
            for I in _all_subsets(c):
                if not is_ideal(c, I)[0]:
                    continue
                for a in fns:
                    v = oracle_lemma31(c, T, I, a)
                    count += 1
                    if v.status == "counterexample":
                        worst = "counterexample"
                        out.append((f"{c.kind} exhaustive", v))
        out.append((f"{_name(c)}: all (T, I, a)", OracleVerdict("lemma31", worst if worst != "holds" else "holds",
                                                                 count, 0.0, 0.0, None, "exhaustive")))
    return out


def _name(c: Carrier) -> str:
    if isinstance(c, FiniteCarrier):
        return f"finite[{','.join(c.labels)}]"
    return c.kind


def corpus_lemma32() -> list[tuple[str, OracleVerdict]]:
    r1, r2 = rat_add(1), rat_add(2)
    e = lambda c, *b: analytic_character(c, list(b))
    out = [
        ("all A=0, c=0", oracle_lemma32([e(r1, 1.0)], [analytic_additive(r1, [0.0])], [0.0], [e(r1, 2.0)])),
        ("mu=e^x, A=x vs its best character fit",
         oracle_lemma32([e(r1, 1.0)], [analytic_additive(r1, [1.0])], *_best_fit(r1, e(r1, 1.0), [1.0]))),
        ("two mus, A=0, cancelling span",
         oracle_lemma32([e(r2, 1, 0), e(r2, 0, 1)], [analytic_additive(r2, [0, 0])] * 2, [1.0, -1.0],
                        [e(r2, 0.5, 0.5), e(r2, 0.5, 0.5)])),
        ("finite Z/3: A=0 forced", oracle_lemma32([ch for ch in enumerate_characters(zmod_add(3))][:2],
                                                   [ComplexFn.zero(zmod_add(3))] * 2, [], [])),
    ]
    return out


def _best_fit(c: Carrier, mu: Character, alpha) -> tuple[list, list]:
    """Least-squares coefficients of mu * (alpha . u) on characters near mu."""
    pts, enc = _points(c)
    target = mu.evaluate(enc) * (c.coordinates(enc) @ np.asarray(alpha, complex))
    b = np.asarray(mu.params, complex)
    chis = [mu] + [analytic_character(c, b + s) for s in (0.05, -0.05, 0.1)]
    M = np.column_stack([ch.evaluate(enc) for ch in chis])
    coef, *_ = np.linalg.lstsq(M, target, rcond=None)
    return [complex(v) for v in coef], chis


def corpus_prop33() -> list[tuple[str, OracleVerdict]]:
    nn, r1, r2 = nonneg_real_mul(), rat_add(1), rat_add(2)
    idc = analytic_character(nn, 1.0)
    ln = analytic_additive(nn, [1.0])
    e1 = analytic_character(r2, [1.0, 0.0])
    e2 = analytic_character(r2, [0.0, 1.0])
    x1, x2 = analytic_additive(r2, [1.0, 0.0]), analytic_additive(r2, [0.0, 1.0])
    zero2 = analytic_additive(r2, [0.0, 0.0])
    out = [
        ("1: id on nonneg, phi1=ln, phi2=1", oracle_prop33(1, Prop33Input(mu=idc, phi1=ln, phi2=lambda enc: np.ones(len(enc)),
                                                                          scalar=2 - 1j))),
        ("1: Psi(0)=0 forces phi=0", oracle_prop33(1, Prop33Input(mu=idc, phi1=analytic_additive(nn, [0.0]), phi2=ln))),
        ("2: T={0} inside I_mu", oracle_prop33(2, Prop33Input(mu=idc, A=ln, cs=[1.0, -1.0],
                                                             chis=[analytic_character(nn, form="one")] * 2,
                                                             T=subset_elements(nn, [0.0])))),
        ("2: x e^x against characters", oracle_prop33(2, Prop33Input(mu=e1, A=x1, cs=[1.0], chis=[e1]))),
        ("3: A1=A2=0", oracle_prop33(3, Prop33Input(mu1=e1, mu2=e2, A1=zero2, A2=zero2, cs=[0.0], chis=[e1]))),
        ("3: nonzero sum", oracle_prop33(3, Prop33Input(mu1=e1, mu2=e2, A1=x1, A2=x2, cs=[1.0, 1.0], chis=[e1, e2]))),
        ("4: a=a1=0", oracle_prop33(4, Prop33Input(mu=e1, a=zero2, a1=zero2, cs=[], chis=[]))),
        ("4: a1 + a^2 nonzero", oracle_prop33(4, Prop33Input(mu=e1, a=x2, a1=x1, cs=[1.0], chis=[e1]))),
        ("5: a=0, A=0", oracle_prop33(5, Prop33Input(mu=e1, mu1=e2, A=zero2, a=zero2, a1=zero2, cs=[], chis=[]))),
        ("5: a nonzero", oracle_prop33(5, Prop33Input(mu=e1, mu1=e2, A=x1, a=x2, a1=zero2, cs=[1.0], chis=[e2]))),
        ("6: both sides zero", oracle_prop33(6, Prop33Input(mu=e1, mu1=e1, A=zero2, a=zero2, a1=zero2))),
        ("6: A = a1 with a=0", oracle_prop33(6, Prop33Input(mu=e1, mu1=e1, A=x1, a=zero2, a1=x1))),
        ("7: reflexive", oracle_prop33(7, Prop33Input(mu=e1, mu1=e1, A=x2, A1=x1, a=x2, a1=x1))),
        ("7: a = -A", oracle_prop33(7, Prop33Input(mu=e1, mu1=e1, A=x2, A1=x1, a=-x2, a1=x1))),
        ("7: different mu", oracle_prop33(7, Prop33Input(mu=e1, mu1=e2, A=x2, A1=x1, a=x2, a1=x1))),
        ("7: nonneg reflexive", oracle_prop33(7, Prop33Input(mu=idc, mu1=idc, A=ln, A1=ln * 0.5, a=ln, a1=ln * 0.5))),
    ]
    r1e = analytic_character(r1, [0.7])
    out.append(("2: rat-add(1) A=0", oracle_prop33(2, Prop33Input(mu=r1e, A=analytic_additive(r1, [0.0]),
                                                                 cs=[2.0, -2.0], chis=[r1e, r1e]))))
    return out


def corpus_prop34() -> list[tuple[str, OracleVerdict]]:
    r2, nn = rat_add(2), nonneg_real_mul()
    chi = analytic_character(r2, [0.3, -0.2])
    g = chi.as_function()
    f1 = psi_extend(chi, analytic_additive(r2, [1.0, 0.0]))
    f2 = psi_extend(chi, analytic_additive(r2, [0.0, 1.0]))
    idc = analytic_character(nn, 1.0)
    ln = analytic_additive(nn, [1.0])
    m2 = mod2_mul()
    chars = [ch for ch in enumerate_characters(m2) if not ch.is_zero]
    out = [
        ("1: 3 f1 + f2 in S_chi", oracle_prop34(1, f1=f1, f2=f2, g=g, scalar=3.0)),
        ("1: f1 not in S_g", oracle_prop34(1, f1=f1, f2=f2, g=analytic_character(r2, [0.0, 0.0]).as_function())),
        ("2: g=h=chi", oracle_prop34(2, f=f1, g=g, h=g)),
        ("2: g != h", oracle_prop34(2, f=f1, g=g, h=analytic_character(r2, [0.3, 0.2]).as_function())),
        ("2: finite sine pair", oracle_prop34(2, f=chars[0].as_function() - chars[1].as_function(),
                                              g=(chars[0].as_function() + chars[1].as_function()) / 2,
                                              h=(chars[0].as_function() + chars[1].as_function()) / 2)),
        ("3: id on nonneg, a=A=ln", oracle_prop34(3, chi=idc, mu=idc, a=ln, A=ln)),
        ("3: different chi, mu", oracle_prop34(3, chi=chi, mu=analytic_character(r2, [0.1, 0.1]),
                                               a=analytic_additive(r2, [1.0, 2.0]), A=analytic_additive(r2, [1.0, 2.0]))),
    ]
    return out


CORPUS = {"lemma31": corpus_lemma31, "lemma32": corpus_lemma32, "prop33": corpus_prop33, "prop34": corpus_prop34}


# ------------------------------------------------------------------ seeded falsification draws


@dataclass
class DrawSummary:
    suite: str
    draws: int
    hypothesis_pass: int
    not_applicable: int
    counterexamples: list

    @property
    def holds(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "draws": self.draws,
            "hypothesis_pass": self.hypothesis_pass,
            "not_applicable": self.not_applicable,
            "counterexamples": self.counterexamples[:10],
            "counterexample_count": len(self.counterexamples),
        }


def _rng(suite: str, seed: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(suite.encode())])


_POOLS: dict[FiniteCarrier, list[Character]] = {}


def _pool(c: FiniteCarrier) -> list[Character]:
    if c not in _POOLS:
        _POOLS[c] = [ch for ch in enumerate_characters(c) if not ch.is_zero]
    return _POOLS[c]


def _draw_char(c: Carrier, rng, near: Character | None = None) -> Character:
    if isinstance(c, FiniteCarrier):
        pool = _pool(c)
        return pool[int(rng.integers(len(pool)))]
    if near is not None and rng.uniform() < 0.5:
        return near
    if isinstance(c, NonnegRealMulCarrier):
        if rng.uniform() < 0.2:
            return analytic_character(c, form="one")
        return analytic_character(c, complex(rng.normal(0, 0.6), rng.normal(0, 0.6)))
    b = rng.normal(0, 0.5, c.dim) + 1j * rng.normal(0, 0.5, c.dim)
    return analytic_character(c, b)


def _draw_additive(c: Carrier, rng, zero_p: float = 0.3):
    if isinstance(c, FiniteCarrier) or rng.uniform() < zero_p:
        return None
    return analytic_additive(c, rng.normal(0, 1, c.dim) + 1j * rng.normal(0, 1, c.dim))


def _zero_additive(c: Carrier):
    if isinstance(c, FiniteCarrier):
        return ComplexFn.zero(c)
    return analytic_additive(c, np.zeros(c.dim))


_DRAW_CARRIERS = None


def _draw_carriers() -> list[Carrier]:
    global _DRAW_CARRIERS
    if _DRAW_CARRIERS is None:
        _DRAW_CARRIERS = [rat_add(1), rat_add(2), nonneg_real_mul(), zmod_add(5), mod2_mul()]
    return _DRAW_CARRIERS


def _cancelling_span(c: Carrier, rng) -> tuple[list, list]:
    """Either an empty span, a span that cancels exactly, or a random one."""
    u = rng.uniform()
    if u < 0.3:
        return [], []
    ch = _draw_char(c, rng)
    z = complex(rng.normal(), rng.normal())
    if u < 0.6:
        return [z, -z], [ch, ch]
    return [z], [ch]


def falsify_lemma32(draws: int = DEFAULT_DRAWS, seed: int = 0) -> DrawSummary:
    rng = _rng("lemma32", seed)
    cars = _draw_carriers()
    ok = na = 0
    bad = []
    for k in range(draws):
        c = cars[k % len(cars)]
        n = int(rng.integers(1, 4))
        mus = []
        while len(mus) < n:
            ch = _draw_char(c, rng)
            if ch.is_zero:
                continue
            mus.append(ch)
        As = [_draw_additive(c, rng, 0.5) or _zero_additive(c) for _ in mus]
        if rng.uniform() < 0.25 and not isinstance(c, FiniteCarrier) and As[0].alpha is not None:
            cs, chis = _best_fit(c, mus[0], As[0].alpha) if not isinstance(c, NonnegRealMulCarrier) else ([], [])
        else:
            cs, chis = _cancelling_span(c, rng)
        v = oracle_lemma32(mus, As, cs, chis)
        if v.status == "holds":
            ok += 1
        elif v.status == "not-applicable":
            na += 1
        else:
            bad.append({"draw": k, "carrier": c.kind, **(v.counterexample or {})})
    return DrawSummary("lemma32", draws, ok, na, bad)


def falsify_prop33(draws: int = DEFAULT_DRAWS, seed: int = 0) -> DrawSummary:
    """Round-robin over the conditional parts 2..7 with ingredients biased towards satisfied hypotheses."""
    rng = _rng("prop33", seed)
    cars = [c for c in _draw_carriers() if not isinstance(c, FiniteCarrier)]
    ok = na = 0
    bad = []
    for k in range(draws):
        part = 2 + k % 6
        c = cars[(k // 6) % len(cars)]
        mu = _draw_char(c, rng)
        while mu.is_zero:
            mu = _draw_char(c, rng)
        mu1 = _draw_char(c, rng, near=mu)
        while mu1.is_zero:
            mu1 = _draw_char(c, rng, near=mu)
        z = _zero_additive(c)
        A = _draw_additive(c, rng) or z
        A1 = _draw_additive(c, rng) or z
        if part == 7 and rng.uniform() < 0.6:
            # mirror the right-hand side so that the hypothesis holds
            mu1 = mu
            sign = 1 if rng.uniform() < 0.5 else -1
            a, a1 = A * sign, A1
        else:
            a = _draw_additive(c, rng) or z
            a1 = _draw_additive(c, rng) or z
        cs, chis = _cancelling_span(c, rng)
        x = Prop33Input(mu=mu, mu1=mu1, mu2=mu1, A=A, A1=A1, A2=A1, a=a, a1=a1, cs=cs, chis=chis)
        if part == 3 and rng.uniform() < 0.5:
            x.A1, x.A2 = z, z
        if part in (5, 6) and rng.uniform() < 0.5:
            x.a, x.A = z, z
            if part == 6:
                x.A = a1
                x.mu1 = mu
        try:
            v = oracle_prop33(part, x)
        except OracleError:
            na += 1
            continue
        if v.status == "holds":
            ok += 1
        elif v.status == "not-applicable":
            na += 1
        else:
            bad.append({"draw": k, "part": part, "carrier": c.kind, **(v.counterexample or {})})
    return DrawSummary("prop33", draws, ok, na, bad)


FALSIFIERS = {"lemma32": falsify_lemma32, "prop33": falsify_prop33}


@dataclass
class SuiteReport:
    suite: str
    instances: list[tuple[str, OracleVerdict]]
    draws: DrawSummary | None

    @property
    def holds(self) -> bool:
        return all(v.holds for _, v in self.instances) and (self.draws is None or self.draws.holds)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "holds": self.holds,
            "instances": [{"name": n, **v.to_json()} for n, v in self.instances],
            "falsification": None if self.draws is None else self.draws.to_json(),
        }


def run_suite(suite: str, draws: int = DEFAULT_DRAWS, seed: int = 0) -> list[SuiteReport]:
    names = SUITES if suite == "all" else (suite,)
    out = []
    for s in names:
        if s not in CORPUS:
            raise OracleError(f"unknown suite {s!r}")
        inst = CORPUS[s]()
        dr = FALSIFIERS[s](draws, seed) if s in FALSIFIERS and draws > 0 else None
        out.append(SuiteReport(s, inst, dr))
    return out
