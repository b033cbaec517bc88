"""Template catalog: every closed-form solution family with its constraints.

Each template carries the formulas as printed and, where substitution shows the
printed text does not solve the equations, a corrected variant. Scalars use
ASCII names: alpha, beta, gamma, lam (lambda), delta, delta1, delta2, c, d.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..funcspace import ComplexFn, psi_extend


class TemplateError(ValueError):
    pass


class DegenerateParameters(TemplateError):
    """A printed-formula denominator vanishes."""


@dataclass
class FamilyParams:
    scalars: dict = field(default_factory=dict)
    characters: dict = field(default_factory=dict)
    additives: dict = field(default_factory=dict)
    lambda1: complex = 0j
    lambda2: complex = 0j

    def __getitem__(self, k):
        for d in (self.scalars, self.characters, self.additives):
            if k in d:
                return d[k]
        if k == "lambda1":
            return self.lambda1
        if k == "lambda2":
            return self.lambda2
        raise KeyError(k)

    def copy(self) -> "FamilyParams":
        return FamilyParams(dict(self.scalars), dict(self.characters), dict(self.additives), self.lambda1, self.lambda2)

    def with_scalars(self, **kw) -> "FamilyParams":
        p = self.copy()
        p.scalars.update({k: complex(v) for k, v in kw.items()})
        return p


@dataclass(frozen=True)
class Constraint:
    """Equality (terms sum to zero) or inequality (terms do not sum to zero)."""

    name: str
    kind: str  # "eq" | "neq"
    terms: Callable[[FamilyParams], tuple]

    def measure(self, p: FamilyParams) -> tuple[float, float]:
        """(|sum|, relative |sum| / max |term|)."""
        t = [complex(v) for v in self.terms(p)]
        s = abs(sum(t))
        m = max((abs(v) for v in t), default=0.0)
        return s, (s / m if m > 0 else s)


def eq(name, terms) -> Constraint:
    return Constraint(name, "eq", terms)


def neq(name, terms) -> Constraint:
    return Constraint(name, "neq", terms)


def nonzero(*names) -> tuple[Constraint, ...]:
    return tuple(neq(f"{n}!=0", (lambda p, n=n: (p[n],))) for n in names)


def _div(a, b, what: str):
    if abs(b) < 1e-300:
        raise DegenerateParameters(f"denominator {what} vanishes")
    return a / b


@dataclass(frozen=True)
class Template:
    id: str
    group: str  # "p41" | "p42" | "t1" | "t2"
    characters: tuple[str, ...]
    psi_slot: str | None
    additives: tuple[str, ...]
    scalars: tuple[str, ...]
    free: tuple[str, ...]
    printed: Callable[[FamilyParams], tuple]
    formulas: dict
    constraints: tuple[Constraint, ...] = ()
    adopted: tuple[Constraint, ...] = ()
    corrected: Callable[[FamilyParams], tuple] | None = None
    solve_printed: Callable | None = None
    solve_adopted: Callable | None = None
    derive: Callable | None = None
    errata: str = ""
    interpretation: str = ""

    @property
    def arity(self) -> int:
        return {"p41": 2, "p42": 3}.get(self.group, 4)

    @property
    def components(self) -> tuple[str, ...]:
        return {2: ("f", "g"), 3: ("f", "g", "h"), 4: ("f", "g1", "h", "g2")}[self.arity]

    @property
    def status(self) -> str:
        return "corrected" if (self.corrected is not None or self.adopted) else "as-printed"

    def effective_constraints(self) -> tuple[Constraint, ...]:
        return self.constraints + self.adopted

    def build(self, p: FamilyParams, variant: str = "effective") -> tuple[ComplexFn, ...]:
        if self.derive is not None:
            p = self.derive(p)
        if variant == "printed" or self.corrected is None:
            return self.printed(p)
        return self.corrected(p)


def psi(chi, phi) -> ComplexFn:
    return psi_extend(chi, phi)


def delta_transform(F, G, H, delta):
    """f = F, g = -delta^2 F/2 + G + delta H, h = -delta F + H."""
    delta = complex(delta)
    return F, -0.5 * delta * delta * F + G + delta * H, -delta * F + H


# ------------------------------------------------------------------ sine addition law


def _p41_1(p):
    x1, x2 = p["chi1"], p["chi2"]
    return p["alpha"] * (x1 - x2), (x1 + x2) / 2


def _p41_2(p):
    x = p["chi"]
    return psi(x, p["A"]), x.as_function()


# ------------------------------------------------------------------ cosine-sine base triples


def _p42_1_base(p):
    x, A, A1 = p["chi"], p["A"], p["A1"]
    return psi(x, A1 + A * A) / 2, x.as_function(), psi(x, A)


def _p42_2_base(p):
    x, mu, A, c = p["chi"], p["mu"], p["A"], p["c"]
    return c * c * (mu - x) - c * psi(x, A), x.as_function(), c * (mu - x)


def _p42_3_base(p):
    x, mu, A, c, d = p["chi"], p["mu"], p["A"], p["c"], p["d"]
    F = c * (mu - x) + c * d * psi(x, A)
    G = (mu + x) / 2 - 0.5 * d * psi(x, A)
    return F, G, psi(x, A)


def _p42_4_base(p):
    return _triple4(p["chi1"], p["chi2"], p["chi3"], p["c"], p["beta"], 1 / (2 * p["alpha"]))


def _triple4(x1, x2, x3, c, beta, hcoef):
    """(c beta x1 + c(2-beta) x2 - 2c x3, beta x1/4 + (2-beta) x2/4 + x3/2, hcoef (x1 - x2))."""
    F = c * beta * x1 + c * (2 - beta) * x2 - 2 * c * x3
    G = beta / 4 * x1 + (2 - beta) / 4 * x2 + x3 / 2
    H = hcoef * (x1 - x2)
    return F, G, H


def _p42(base):
    def build(p):
        return delta_transform(*base(p), p["delta"])

    return build


# ------------------------------------------------------------------ lambda1 = 0


def _t1_1(p):
    m, A, A1, l2 = p["m"], p["A"], p["A1"], p.lambda2
    return psi(m, A), m.as_function(), psi(m, A1 + l2 * l2 * (A * A)) / 2, m.as_function()


def _t1_2(p):
    m, mu, A, a, l2 = p["m"], p["mu"], p["A"], p["alpha"], p.lambda2
    return a * (mu - m), (mu + m) / 2, a * a * l2 * l2 * (mu - m) - a * l2 * psi(m, A), m.as_function()


def _t1_3_printed(p):
    m, mu, A, c, l2 = p["m"], p["mu"], p["A"], p["c"], p.lambda2
    f = psi(m, A) / l2
    h = c * c * (mu - m) - c * psi(m, A)
    g2 = (mu - m) / 2 - psi(m, A) / (2 * c)
    return f, m.as_function(), h, g2


def _t1_3_corrected(p):
    f, g1, h, _ = _t1_3_printed(p)
    m, mu, A, c = p["m"], p["mu"], p["A"], p["c"]
    return f, g1, h, (mu + m) / 2 + psi(m, A) / (2 * c)


def _t1_4(p):
    m, mu, A, c, d, l2 = p["m"], p["mu"], p["A"], p["c"], p["d"], p.lambda2
    f = -(mu - m) / (d * l2)
    h = c * (mu - m) + psi(m, A) / d
    return f, (mu + m) / 2, h, m.as_function()


def _t1_5(p):
    m, mu, A, c, d, l2 = p["m"], p["mu"], p["A"], p["c"], p["d"], p.lambda2
    f = psi(m, A) / l2
    h = c * (mu - m) + psi(m, A) / d
    g2 = (mu + m) / 2 - 0.5 * d * psi(m, A)
    return f, m.as_function(), h, g2


def _h_three(p):
    x1, x2, x3, c, b = p["chi1"], p["chi2"], p["chi3"], p["c"], p["beta"]
    return c * b * x1 + c * (2 - b) * x2 - 2 * c * x3


def _t1_6(p):
    x1, x2, x3, b, lam, l2 = p["chi1"], p["chi2"], p["chi3"], p["beta"], p["lam"], p.lambda2
    f = (x1 - x2) / (2 * lam * l2)
    g2 = (b * x1 + (2 - b) * x2 + 2 * x3) / 4
    return f, (x1 + x2) / 2, _h_three(p), g2


def _t1_7(p):
    x1, x2, x3, b, lam, l2 = p["chi1"], p["chi2"], p["chi3"], p["beta"], p["lam"], p.lambda2
    f = _div(1, lam * l2 * (2 - b), "lam*lambda2*(2-beta)") * (x1 - x3)
    g2 = (-b * x1 + (2 - b) * x2 + 2 * x3) / (2 * (2 - b))
    return f, (x1 + x3) / 2, _h_three(p), g2


def _t1_8(p):
    x1, x2, x3, b, lam, l2 = p["chi1"], p["chi2"], p["chi3"], p["beta"], p["lam"], p.lambda2
    f = -_div(1, lam * l2 * b, "lam*lambda2*beta") * (x2 - x3)
    g2 = (b * x1 - (2 - b) * x2 + 2 * x3) / (2 * b)
    return f, (x2 + x3) / 2, _h_three(p), g2


# ------------------------------------------------------------------ lambda1, lambda2 != 0


def _t2_1(p):
    x, A, A1, de, l1 = p["chi"], p["A"], p["A1"], p["delta"], p.lambda1
    f = psi(x, A1 + A * A) / 2
    g1 = -0.25 * de * psi(x, de * A1 - 4 * A) - 0.25 * de * de * psi(x, A * A) + x
    h = -psi(x, de * A1 - 2 * A) / (2 * l1) - de / (2 * l1) * psi(x, A * A)
    g2 = -0.25 * de * psi(x, de * A1 + 2 * A) - 0.25 * de * de * psi(x, A * A) + x
    return f, g1, h, g2


def _t2_2_parts(p):
    x, mu, A, d1, d2 = p["chi"], p["mu"], p["A"], p["delta1"], p["delta2"]
    l1, l2 = p.lambda1, p.lambda2
    D1 = l1 * d1 + d2 * d2
    D2 = l2 * d2 + d1 * d1
    k = _div(l1, D1, "lambda1*delta1+delta2^2")
    q = _div(l2, D2, "lambda2*delta2+delta1^2")
    return x, mu, A, d1, d2, D1, D2, k, q


def _t2_2_printed(p):
    x, mu, A, d1, d2, D1, D2, k, q = _t2_2_parts(p)
    l1, l2 = p.lambda1, p.lambda2
    f = k * (k * (mu - x) - psi(x, A))
    g1 = (l1 * d1 / (2 * D1)) * ((1 + d2 * d2 / D1) * (mu - x) + psi(x, A)) + x
    h = q * q * (mu - x)
    g2 = (l2 * d2 / (2 * D2)) * ((1 + d1 * d1 / D2) * (mu - x) - d1 * psi(x, A)) + x
    return f, g1, h, g2


def _t2_2_corrected(p):
    x, mu, A, d1, d2, D1, D2, k, q = _t2_2_parts(p)
    f, _, _, g2 = _t2_2_printed(p)
    l1 = p.lambda1
    g1 = (l1 * d1 / (2 * D1)) * ((1 + d2 * d2 / D1) * (mu - x) + d1 * psi(x, A)) + x
    h = q * q * (mu - x) + _div(q * d1, d2, "delta2") * psi(x, A)
    return f, g1, h, g2


def _t2_3(p, fixed: bool):
    x, mu, A, c, de = p["chi"], p["mu"], p["A"], p["c"], p["delta"]
    l1, l2 = p.lambda1, p.lambda2
    f = c * c * (mu - x) - c * psi(x, A)
    e = (de * c - 1) ** 2
    g1 = ((1 - e) * mu + (1 + e) * x) / 2 + 0.5 * de * de * c * psi(x, A)
    h = _div(l2 * l2 * c * c, de * de, "delta^2") * (mu - x) + de * c / l1 * psi(x, A)
    k = (de * c - 1) ** 2 if fixed else (c - de) ** 2
    g2 = ((1 - de * de * c * c) * mu + (1 + de * de * c * c) * x) / 2 - _div(
        de**3 * k, 2 * c * l1 * l2 * l2, "2c*lambda1*lambda2^2"
    ) * psi(x, A)
    return f, g1, h, g2


def _t2_4(p, fixed: bool):
    x, mu, A, c, d, de = p["chi"], p["mu"], p["A"], p["c"], p["d"], p["delta"]
    l1, l2 = p.lambda1, p.lambda2
    if abs(d - de) < 1e-300:
        raise DegenerateParameters("d - delta vanishes")
    f = c * (mu - x) + c * d * psi(x, A)
    g1_psi = -((d - de) ** 2) / (2 * d) if fixed else (d * d + de * de) / (2 * d)
    g1 = ((d * d - de * de) * mu + (d * d + de * de) * x) / (2 * d * d) + g1_psi * psi(x, A)
    h = -de / (d * d * l1) * (mu - x) + (d - de) / (d * l1) * psi(x, A)
    g2 = ((de * d * d + l1 * l2 * l2) * mu + (de * d * d - l1 * l2 * l2) * x) / (2 * de * d * d) - (
        l1 * l2 * l2 / (2 * d * (d - de))
    ) * psi(x, A)
    return f, g1, h, g2


# t2.5 sub-variants: slot order (a, b, c) for H2 = alpha beta a + alpha (2-beta) b - 2 alpha c,
# G2 = beta a/4 + (2-beta) b/4 + c/2 and lambda2 F2 = sign (a - b)/(2 gamma).
T25_SLOTS = {
    "i": ("chi1", "chi2", "chi3"),
    "ii": ("chi2", "chi1", "chi3"),
    "iii": ("chi1", "chi3", "chi2"),
    "iv": ("chi3", "chi1", "chi2"),
    "v": ("chi2", "chi3", "chi1"),
    "vi": ("chi3", "chi2", "chi1"),
}
# printed lambda2 F2 runs opposite to the slot pattern only in (ii)
T25_PRINTED_F2_SIGN = {"i": 1, "ii": -1, "iii": 1, "iv": 1, "v": 1, "vi": 1}


def t25_derived(v: str, c, d, g, lam, l1, l2) -> tuple:
    """(delta1, delta2, alpha, beta) from the printed formulas of sub-variant v."""
    if abs(g) < 1e-300 or abs(lam) < 1e-300 or abs(c) < 1e-300:
        raise DegenerateParameters("gamma, lam and c must be nonzero")
    if v in ("iii", "iv") and abs(2 - d) < 1e-300:
        raise DegenerateParameters("2 - d vanishes")
    if v in ("v", "vi") and abs(d) < 1e-300:
        raise DegenerateParameters("d vanishes")
    if v == "i":
        return g * l2 / lam, lam * l1 / g, -c * g * l2 / (lam * l1), d - 1 / (2 * c * g * l2)
    if v == "ii":
        return -g * l2 / lam, -lam * l1 / g, c * g * l2 / (lam * l1), 2 - d - 1 / (2 * c * g * l2)
    if v == "iii":
        return (
            (4 * c * g * l2 - 1) / (2 * c * (2 - d) * lam),
            (2 - d) * lam * l1 / (2 * g),
            c * g * l2 / (lam * l1),
            (1 - 2 * c * d * g * l2) / (c * (2 - d) * g * l2),
        )
    if v == "iv":
        return (
            -(1 + 4 * c * g * l2) / (2 * c * (2 - d) * lam),
            -(2 - d) * lam * l1 / (2 * g),
            -c * g * l2 / (lam * l1),
            (1 + 4 * c * g * l2) / (c * (2 - d) * g * l2),
        )
    if v == "v":
        return (
            (1 - 4 * c * g * l2) / (2 * c * d * lam),
            -d * lam * l1 / (2 * g),
            -c * g * l2 / (lam * l1),
            (1 - 2 * c * (2 - d) * g * l2) / (c * d * g * l2),
        )
    if v == "vi":
        return (
            (1 + 4 * c * g * l2) / (2 * c * d * lam),
            d * lam * l1 / (2 * g),
            c * g * l2 / (lam * l1),
            (1 + 4 * c * g * l2) / (c * d * g * l2),
        )
    raise KeyError(v)


def t25_gamma_cubic(v: str, c, d, lam, l1, l2) -> np.ndarray:
    """Coefficients (highest first) of the cubic in u = 1/gamma encoding 2 alpha gamma^2 beta (2-beta) = 1.

    Every sub-variant has alpha = s gamma and beta = p0 + q u, so the constraint
    reads 2 s (p0 + q u)(2 - p0 - q u) = u^3.
    """
    k = c * l2 / (lam * l1)
    tab = {
        "i": (-k, d, -1 / (2 * c * l2)),
        "ii": (k, 2 - d, -1 / (2 * c * l2)),
        "iii": (k, -2 * d / (2 - d), 1 / (c * (2 - d) * l2)),
        "iv": (-k, 4 / (2 - d), 1 / (c * (2 - d) * l2)),
        "v": (-k, -2 * (2 - d) / d, 1 / (c * d * l2)),
        "vi": (k, 4 / d, 1 / (c * d * l2)),
    }
    s, p0, q = tab[v]
    # 2 s (p0 + q u)(2 - p0 - q u) - u^3
    a2 = -2 * s * q * q
    a1 = 2 * s * (q * (2 - p0) - p0 * q)
    a0 = 2 * s * p0 * (2 - p0)
    return np.array([-1, a2, a1, a0], dtype=complex)


def _t25_derive(v):
    def derive(p: FamilyParams) -> FamilyParams:
        d1, d2, a, b = t25_derived(v, p["c"], p["d"], p["gamma"], p["lam"], p.lambda1, p.lambda2)
        return p.with_scalars(delta1=d1, delta2=d2, alpha=a, beta=b)

    return derive


def _t25(v: str, fixed: bool):
    sa, sb, sc = T25_SLOTS[v]
    sign = 1 if fixed else T25_PRINTED_F2_SIGN[v]

    def build(p):
        x1, x2, x3 = p["chi1"], p["chi2"], p["chi3"]
        c, d, g, lam = p["c"], p["d"], p["gamma"], p["lam"]
        d1, d2, al, be = p["delta1"], p["delta2"], p["alpha"], p["beta"]
        F1, G1, lH1 = _triple4(x1, x2, x3, c, d, 1 / (2 * lam))
        a, b, cc = p[sa], p[sb], p[sc]
        H2 = al * be * a + al * (2 - be) * b - 2 * al * cc
        G2 = be / 4 * a + (2 - be) / 4 * b + cc / 2
        lF2 = sign / (2 * g) * (a - b)
        g1 = -0.5 * d1 * d1 * F1 + G1 + d1 * lH1
        g2 = -0.5 * d2 * d2 * H2 + G2 + d2 * lF2
        return F1, g1, H2, g2

    return build


# ------------------------------------------------------------------ solve hooks


def _c_from_d(p, rng):
    p.scalars["c"] = 1 / p["d"] ** 2


def _c_from_lam_beta(p, rng):
    b, lam = p["beta"], p["lam"]
    p.scalars["c"] = _div(1, 2 * lam * lam * b * (2 - b), "2 lam^2 beta (2-beta)")


def _c_from_alpha_beta(p, rng):
    b, a = p["beta"], p["alpha"]
    p.scalars["c"] = _div(1, 2 * a * a * b * (2 - b), "2 alpha^2 beta (2-beta)")


def _pick_root(coeffs, rng, nonzero=True) -> complex:
    r = np.roots(coeffs)
    if nonzero:
        r = r[np.abs(r) > 1e-8]
    if len(r) == 0:
        raise DegenerateParameters("no admissible root")
    r = r[np.argsort(np.round(r.real, 12) + 1e-3 * np.round(r.imag, 12))]
    return complex(r[int(rng.integers(len(r)))])


def _t2_1_delta(p, rng):
    p.scalars["delta"] = _pick_root([1, 0, 0, p.lambda1 * p.lambda2**2], rng)


def _t2_2_delta2(p, rng):
    p.scalars["delta2"] = p.lambda1 * p.lambda2 / p["delta1"]


def _t2_3_delta(p, rng):
    c = p["c"]
    p.scalars["delta"] = _pick_root([c, -1, 0, c * p.lambda1 * p.lambda2**2], rng)


def _t2_4_delta(p, rng):
    d = p["d"]
    p.scalars["delta"] = _pick_root([1, -2 * d, d * d, p.lambda1 * p.lambda2**2], rng)


def _t25_solve(v):
    def solve(p, rng):
        lam, d = p["lam"], p["d"]
        p.scalars["c"] = c = _div(1, 2 * lam * lam * d * (2 - d), "2 lam^2 d (2-d)")
        u = _pick_root(t25_gamma_cubic(v, c, d, lam, p.lambda1, p.lambda2), rng)
        p.scalars["gamma"] = 1 / u

    return solve


# ------------------------------------------------------------------ constraints


C_CD2 = eq("1-c*d^2=0", lambda p: (1, -p["c"] * p["d"] ** 2))
C_LAM_BETA = eq("2*c*lam^2*beta*(2-beta)=1", lambda p: (2 * p["c"] * p["lam"] ** 2 * p["beta"] * (2 - p["beta"]), -1))
C_ALPHA_BETA = eq("2*c*alpha^2*beta*(2-beta)=1", lambda p: (2 * p["c"] * p["alpha"] ** 2 * p["beta"] * (2 - p["beta"]), -1))
C_T25_D = eq("2*c*lam^2*d*(2-d)=1", lambda p: (2 * p["c"] * p["lam"] ** 2 * p["d"] * (2 - p["d"]), -1))
C_T25_G = eq(
    "2*alpha*gamma^2*beta*(2-beta)=1", lambda p: (2 * p["alpha"] * p["gamma"] ** 2 * p["beta"] * (2 - p["beta"]), -1)
)
C_T21 = eq("delta^3+lambda1*lambda2^2=0", lambda p: (p["delta"] ** 3, p.lambda1 * p.lambda2**2))
C_T22 = eq("delta1*delta2-lambda1*lambda2=0", lambda p: (p["delta1"] * p["delta2"], -p.lambda1 * p.lambda2))
C_T22_N1 = neq("lambda2*delta2+delta1^2!=0", lambda p: (p.lambda2 * p["delta2"], p["delta1"] ** 2))
C_T22_N2 = neq("lambda1*delta1+delta2^2!=0", lambda p: (p.lambda1 * p["delta1"], p["delta2"] ** 2))
C_T23 = eq(
    "c*delta^3-delta^2+c*lambda1*lambda2^2=0",
    lambda p: (p["c"] * p["delta"] ** 3, -p["delta"] ** 2, p["c"] * p.lambda1 * p.lambda2**2),
)
C_T24_N = neq("d!=delta", lambda p: (p["d"], -p["delta"]))
C_T24 = eq(
    "delta*(d-delta)^2+lambda1*lambda2^2=0",
    lambda p: (p["delta"] * p["d"] ** 2, -2 * p["d"] * p["delta"] ** 2, p["delta"] ** 3, p.lambda1 * p.lambda2**2),
)
C_BETA2 = neq("2-beta!=0", lambda p: (2, -p["beta"]))
C_D2 = neq("2-d!=0", lambda p: (2, -p["d"]))


F_DT = {"f": "F", "g": "-delta^2 F/2 + G + delta H", "h": "-delta F + H"}


def _catalog() -> dict[str, Template]:
    T = {}

    def add(t: Template):
        T[t.id] = t

    add(Template(
        "p41.1", "p41", ("chi1", "chi2"), None, (), ("alpha",), ("alpha",), _p41_1,
        {"f": "alpha (chi1 - chi2)", "g": "(chi1 + chi2)/2"}, nonzero("alpha"),
    ))
    add(Template(
        "p41.2", "p41", ("chi",), "chi", ("A",), (), (), _p41_2, {"f": "Psi_chi(A)", "g": "chi"},
    ))
    add(Template(
        "p42.1", "p42", ("chi",), "chi", ("A", "A1"), ("delta",), ("delta",), _p42(_p42_1_base),
        {**F_DT, "F": "Psi_chi(A1 + A^2)/2", "G": "chi", "H": "Psi_chi(A)"},
    ))
    add(Template(
        "p42.2", "p42", ("mu", "chi"), "chi", ("A",), ("c", "delta"), ("c", "delta"), _p42(_p42_2_base),
        {**F_DT, "F": "c^2 (mu - chi) - c Psi_chi(A)", "G": "chi", "H": "c (mu - chi)"}, nonzero("c"),
    ))
    add(Template(
        "p42.3", "p42", ("mu", "chi"), "chi", ("A",), ("c", "d", "delta"), ("d", "delta"), _p42(_p42_3_base),
        {**F_DT, "F": "c (mu - chi) + c d Psi_chi(A)", "G": "(mu + chi)/2 - d Psi_chi(A)/2", "H": "Psi_chi(A)"},
        nonzero("c", "d") + (C_CD2,), solve_printed=_c_from_d,
    ))
    add(Template(
        "p42.4", "p42", ("chi1", "chi2", "chi3"), None, (), ("c", "alpha", "beta", "delta"),
        ("alpha", "beta", "delta"), _p42(_p42_4_base),
        {**F_DT, "F": "c beta chi1 + c (2-beta) chi2 - 2 c chi3",
         "G": "beta chi1/4 + (2-beta) chi2/4 + chi3/2", "H": "(chi1 - chi2)/(2 alpha)"},
        nonzero("c", "alpha", "beta") + (C_ALPHA_BETA,), solve_printed=_c_from_alpha_beta,
    ))

    add(Template(
        "t1.1", "t1", ("m",), "m", ("A", "A1"), (), (), _t1_1,
        {"f": "Psi_m(A)", "g1": "m", "h": "Psi_m(A1 + lambda2^2 A^2)/2", "g2": "m"},
    ))
    add(Template(
        "t1.2", "t1", ("mu", "m"), "m", ("A",), ("alpha",), ("alpha",), _t1_2,
        {"f": "alpha (mu - m)", "g1": "(mu + m)/2", "h": "alpha^2 lambda2^2 (mu - m) - alpha lambda2 Psi_m(A)",
         "g2": "m"}, nonzero("alpha"),
    ))
    add(Template(
        "t1.3", "t1", ("mu", "m"), "m", ("A",), ("c",), ("c",), _t1_3_printed,
        {"f": "Psi_m(A)/lambda2", "g1": "m", "h": "c^2 (mu - m) - c Psi_m(A)",
         "g2": "(mu - m)/2 - Psi_m(A)/(2c)"}, nonzero("c"),
        corrected=_t1_3_corrected,
        errata="g2 corrected to (mu + m)/2 + Psi_m(A)/(2c)",
    ))
    add(Template(
        "t1.4", "t1", ("mu", "m"), "m", ("A",), ("c", "d"), ("c", "d"), _t1_4,
        {"f": "-(mu - m)/(d lambda2)", "g1": "(mu + m)/2", "h": "c (mu - m) + Psi_m(A)/d", "g2": "m"},
        nonzero("c", "d"), adopted=(C_CD2,), solve_adopted=_c_from_d,
        errata="requires 1-c*d^2=0 (not stated for this family)",
    ))
    add(Template(
        "t1.5", "t1", ("mu", "m"), "m", ("A",), ("c", "d"), ("d",), _t1_5,
        {"f": "Psi_m(A)/lambda2", "g1": "m", "h": "c (mu - m) + Psi_m(A)/d",
         "g2": "(mu + m)/2 - d Psi_m(A)/2"},
        nonzero("c", "d") + (C_CD2,), solve_printed=_c_from_d,
    ))
    three = ("chi1", "chi2", "chi3")
    h3 = "c beta chi1 + c (2-beta) chi2 - 2 c chi3"
    add(Template(
        "t1.6", "t1", three, None, (), ("c", "beta", "lam"), ("beta", "lam"), _t1_6,
        {"f": "(chi1 - chi2)/(2 lam lambda2)", "g1": "(chi1 + chi2)/2", "h": h3,
         "g2": "(beta chi1 + (2-beta) chi2 + 2 chi3)/4"},
        nonzero("c", "beta", "lam") + (C_LAM_BETA,), solve_printed=_c_from_lam_beta,
    ))
    add(Template(
        "t1.7", "t1", three, None, (), ("c", "beta", "lam"), ("beta", "lam"), _t1_7,
        {"f": "(chi1 - chi3)/(lam lambda2 (2-beta))", "g1": "(chi1 + chi3)/2", "h": h3,
         "g2": "(-beta chi1 + (2-beta) chi2 + 2 chi3)/(2 (2-beta))"},
        nonzero("c", "beta", "lam") + (C_LAM_BETA, C_BETA2), solve_printed=_c_from_lam_beta,
    ))
    add(Template(
        "t1.8", "t1", three, None, (), ("c", "beta", "lam"), ("beta", "lam"), _t1_8,
        {"f": "-(chi2 - chi3)/(lam lambda2 beta)", "g1": "(chi2 + chi3)/2", "h": h3,
         "g2": "(beta chi1 - (2-beta) chi2 + 2 chi3)/(2 beta)"},
        nonzero("c", "beta", "lam") + (C_LAM_BETA,), solve_printed=_c_from_lam_beta,
    ))

    add(Template(
        "t2.1", "t2", ("chi",), "chi", ("A", "A1"), ("delta",), ("delta",), _t2_1,
        {"f": "Psi_chi(A1 + A^2)/2", "g1": "-delta Psi_chi(delta A1 - 4A)/4 - delta^2 Psi_chi(A^2)/4 + chi",
         "h": "-Psi_chi(delta A1 - 2A)/(2 lambda1) - delta Psi_chi(A^2)/(2 lambda1)",
         "g2": "-delta Psi_chi(delta A1 + 2A)/4 - delta^2 Psi_chi(A^2)/4 + chi"},
        nonzero("delta"), adopted=(C_T21,), solve_adopted=_t2_1_delta,
        errata="requires delta^3+lambda1*lambda2^2=0",
    ))
    add(Template(
        "t2.2", "t2", ("mu", "chi"), "chi", ("A",), ("delta1", "delta2"), ("delta1", "delta2"),
        _t2_2_printed,
        {"f": "k (k (mu - chi) - Psi_chi(A)), k = lambda1/(lambda1 delta1 + delta2^2)",
         "g1": "lambda1 delta1/(2 D1) ((1 + delta2^2/D1)(mu - chi) + Psi_chi(A)) + chi, D1 = lambda1 delta1 + delta2^2",
         "h": "(lambda2/(lambda2 delta2 + delta1^2))^2 (mu - chi)",
         "g2": "lambda2 delta2/(2 D2) ((1 + delta1^2/D2)(mu - chi) - delta1 Psi_chi(A)) + chi, "
               "D2 = lambda2 delta2 + delta1^2"},
        nonzero("delta1", "delta2") + (C_T22_N1, C_T22_N2), adopted=(C_T22,), corrected=_t2_2_corrected,
        solve_adopted=_t2_2_delta2,
        errata="requires delta1*delta2=lambda1*lambda2; h gains q delta1/delta2 Psi_chi(A) with "
               "q = lambda2/D2; the Psi_chi(A) coefficient of g1 is lambda1 delta1^2/(2 D1)",
        interpretation="the unbalanced parenthesis in f is closed at the end: f = k (k (mu - chi) - Psi_chi(A))",
    ))
    add(Template(
        "t2.3", "t2", ("mu", "chi"), "chi", ("A",), ("c", "delta"), ("c",), lambda p: _t2_3(p, False),
        {"f": "c^2 (mu - chi) - c Psi_chi(A)",
         "g1": "((1-(delta c-1)^2) mu + (1+(delta c-1)^2) chi)/2 + delta^2 c Psi_chi(A)/2",
         "h": "lambda2^2 c^2/delta^2 (mu - chi) + delta c/lambda1 Psi_chi(A)",
         "g2": "((1-delta^2 c^2) mu + (1+delta^2 c^2) chi)/2 - delta^3 (c-delta)^2/(2 c lambda1 lambda2^2) Psi_chi(A)"},
        nonzero("c", "delta") + (C_T23,), corrected=lambda p: _t2_3(p, True), solve_printed=_t2_3_delta,
        errata="the Psi_chi(A) coefficient of g2 is -delta^3 (c delta - 1)^2/(2 c lambda1 lambda2^2)",
    ))
    add(Template(
        "t2.4", "t2", ("mu", "chi"), "chi", ("A",), ("c", "d", "delta"), ("d", "delta"),
        lambda p: _t2_4(p, False),
        {"f": "c (mu - chi) + c d Psi_chi(A)",
         "g1": "((d^2-delta^2) mu + (d^2+delta^2) chi)/(2 d^2) + (d^2+delta^2)/(2d) Psi_chi(A)",
         "h": "-delta/(d^2 lambda1) (mu - chi) + (d-delta)/(d lambda1) Psi_chi(A)",
         "g2": "((delta d^2 + lambda1 lambda2^2) mu + (delta d^2 - lambda1 lambda2^2) chi)/(2 delta d^2)"
               " - lambda1 lambda2^2/(2 d (d-delta)) Psi_chi(A)"},
        nonzero("c", "d", "delta") + (C_T24_N, C_CD2), adopted=(C_T24,), corrected=lambda p: _t2_4(p, True),
        solve_printed=_c_from_d, solve_adopted=_t2_4_delta,
        errata="requires delta*(d-delta)^2+lambda1*lambda2^2=0; the Psi_chi(A) coefficient of g1 is -(d-delta)^2/(2d)",
        interpretation="the argument-free Psi_chi in g2 is read as Psi_chi(A)",
    ))
    for v in T25_SLOTS:
        sa, sb, sc = T25_SLOTS[v]
        sgn = "" if T25_PRINTED_F2_SIGN[v] > 0 else "-"
        add(Template(
            f"t2.5.{v}", "t2", three, None, (),
            ("c", "d", "lam", "gamma", "delta1", "delta2", "alpha", "beta"), ("d", "lam"),
            _t25(v, False),
            {"f": "F1", "g1": "-delta1^2 F1/2 + G1 + delta1 lambda1 H1",
             "h": "H2", "g2": "-delta2^2 H2/2 + G2 + delta2 lambda2 F2",
             "F1": "c d chi1 + c (2-d) chi2 - 2 c chi3", "G1": "d chi1/4 + (2-d) chi2/4 + chi3/2",
             "lambda1 H1": "(chi1 - chi2)/(2 lam)",
             "H2": f"alpha beta {sa} + alpha (2-beta) {sb} - 2 alpha {sc}",
             "G2": f"beta {sa}/4 + (2-beta) {sb}/4 + {sc}/2",
             "lambda2 F2": f"{sgn}({sa} - {sb})/(2 gamma)"},
            nonzero("c", "d", "lam", "gamma", "delta1", "delta2", "alpha", "beta") + (C_T25_D, C_T25_G),
            corrected=_t25(v, True) if T25_PRINTED_F2_SIGN[v] < 0 else None,
            solve_printed=_t25_solve(v), derive=_t25_derive(v),
            errata="lambda2 F2 is (chi2 - chi1)/(2 gamma)" if T25_PRINTED_F2_SIGN[v] < 0 else "",
        ))
    return T


CATALOG: dict[str, Template] = _catalog()
FAMILY_IDS: tuple[str, ...] = tuple(CATALOG)


def get_template(family_id: str) -> Template:
    try:
        return CATALOG[family_id]
    except KeyError:
        raise TemplateError(f"unknown family id {family_id!r}") from None
