"""Identify which catalog families a verified solution belongs to and recover their parameters.

Pipeline: recover candidate characters (exact enumeration on finite carriers,
matrix-pencil exponent estimation along lines on analytic carriers), decompose every component into the normal form
sum_k chi_k * (const + linear + quadratic in the carrier coordinates), read the
template parameters off the normal-form coefficients, rebuild and compare
pointwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .carrier import Carrier, FiniteCarrier, NonnegRealMulCarrier, RatAddCarrier, check_square_generated
from .funcspace import (
    AdditiveFn,
    Character,
    ComplexFn,
    analytic_character,
    default_tol,
    enumerate_characters,
    linear_independence,
)
from .families.build import build_instance, characters_coincide, component_residual, validate_constraints
from .families.catalog import (
    FAMILY_IDS,
    T25_SLOTS,
    DegenerateParameters,
    FamilyParams,
    TemplateError,
    get_template,
)

CONSTRAINT_TOL = 1e-8
PRUNE_TOL = 1e-7
POLISH_GATE = 1e-4
POLISH_SKIP = 1e-12
PENCIL_HALF = 15
PENCIL_STEP = 0.25
CLUSTER_TOL = 2e-3
PAIR_TOL = 1e-6

# families whose instances coincide after relabelling the characters
EQUIVALENCE_CLASSES = (
    ("t1.6", "t1.7", "t1.8"),
    ("t2.5.i", "t2.5.ii", "t2.5.iii", "t2.5.iv", "t2.5.v", "t2.5.vi"),
)


class ClassificationError(ValueError):
    pass


# ------------------------------------------------------------------ normal form


def _monomials(u: np.ndarray) -> np.ndarray:
    """Columns 1, u_i, u_i u_j (i <= j)."""
    n, d = u.shape
    cols = [np.ones(n)]
    cols += [u[:, i] for i in range(d)]
    cols += [u[:, i] * u[:, j] for i in range(d) for j in range(i, d)]
    return np.column_stack(cols)


def _n_monomials(d: int) -> int:
    return 1 + d + d * (d + 1) // 2


def _char_degree(ch: Character) -> int:
    """Polynomial degree allowed next to a character (0 where additive functions vanish)."""
    if isinstance(ch.carrier, FiniteCarrier) or ch.form == "one":
        return 0
    return 2


def _n_terms(d: int, degree: int) -> int:
    return (1, 1 + d, _n_monomials(d))[degree]


def _design(chars, carrier: Carrier, enc: np.ndarray, degrees=None) -> tuple[np.ndarray, list[tuple[int, int]]]:
    u = carrier.coordinates(enc)
    mono = _monomials(u)
    cols, index = [], []
    for k, ch in enumerate(chars):
        v = ch.evaluate(enc)
        mask = ~ch.in_null_ideal(enc)
        deg = _char_degree(ch) if degrees is None else min(degrees[k], _char_degree(ch))
        for j in range(_n_terms(carrier.dim, deg)):
            cols.append(np.where(mask, v * mono[:, j], 0))
            index.append((k, j))
    if not cols:
        return np.zeros((len(enc), 0), complex), index
    return np.column_stack(cols), index


def _solve(M: np.ndarray, Y: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(M), axis=0)
    scale[scale == 0] = 1
    theta, *_ = np.linalg.lstsq(M / scale, Y, rcond=1e-13)
    return theta / scale[:, None]


@dataclass
class NormalForm:
    """Per-component coefficients over candidate characters."""

    chars: list[Character]
    const: np.ndarray  # (ncomp, nchar)
    lin: np.ndarray  # (ncomp, nchar, d)
    quad: np.ndarray  # (ncomp, nchar, d, d)
    misfit: float
    names: tuple[str, ...]

    def slot(self, name: str) -> int:
        return self.names.index(name)


def _unpack(theta: np.ndarray, index, nchar: int, ncomp: int, d: int):
    const = np.zeros((ncomp, nchar), complex)
    lin = np.zeros((ncomp, nchar, d), complex)
    quad = np.zeros((ncomp, nchar, d, d), complex)
    pairs = [(i, j) for i in range(d) for j in range(i, d)]
    for row, (k, j) in enumerate(index):
        for c in range(ncomp):
            v = theta[row, c]
            if j == 0:
                const[c, k] = v
            elif j <= d:
                lin[c, k, j - 1] = v
            else:
                a, b = pairs[j - 1 - d]
                if a == b:
                    quad[c, k, a, a] = v
                else:
                    quad[c, k, a, b] = quad[c, k, b, a] = v / 2
    return const, lin, quad


def decompose(comps, chars: list[Character], names, degrees=None) -> NormalForm:
    carrier = comps[0].carrier
    pts, enc = _grid(carrier)
    Y = np.column_stack([f.evaluate(enc) for f in comps])
    M, index = _design(chars, carrier, enc, degrees)
    if M.shape[1] == 0:
        theta = np.zeros((0, len(comps)), complex)
        misfit = float(np.max(np.abs(Y))) / max(float(np.max(np.abs(Y))), 1e-300)
    else:
        theta = _solve(M, Y)
        ysc = np.max(np.abs(Y), axis=0)
        ysc[ysc == 0] = 1
        misfit = float(np.max(np.abs(M @ theta - Y) / ysc))
    const, lin, quad = _unpack(theta, index, len(chars), len(comps), carrier.dim)
    return NormalForm(chars, const, lin, quad, misfit, tuple(names))


def _grid(carrier: Carrier):
    if isinstance(carrier, FiniteCarrier):
        pts = list(carrier.elements)
        return pts, carrier.encode(pts)
    return carrier.fit_grid


# ------------------------------------------------------------------ character recovery


def _pencil(samples: np.ndarray, step: float) -> np.ndarray:
    """Exponents of the exponential-polynomial signal sampled at uniform spacing."""
    n = len(samples)
    L = n // 2
    Y = np.array([samples[i : i + L + 1] for i in range(n - L)])
    if not np.any(Y):
        return np.zeros(0, complex)
    _, s, vh = np.linalg.svd(Y)
    M = int(np.sum(s > 1e-10 * s[0]))
    V = vh[:M].T
    z = np.linalg.eigvals(np.linalg.pinv(V[:-1]) @ V[1:])
    return z[np.abs(z) > 1e-12]


def _cluster(z: np.ndarray, step: float, tol: float = CLUSTER_TOL) -> list[complex]:
    """Merge the split eigenvalues of each defective pole.

    Individual eigenvalues of a perturbed Jordan block are only accurate to
    eps**(1/m), but their mean is accurate to eps, so poles are averaged
    before taking logarithms.
    """
    logs = np.log(z) / step
    out: list[list[int]] = []
    for i in sorted(range(len(z)), key=lambda i: (logs[i].real, logs[i].imag)):
        for grp in out:
            if abs(np.mean(logs[grp]) - logs[i]) < tol:
                grp.append(i)
                break
        else:
            out.append([i])
    return [complex(np.log(np.mean(z[g])) / step) for g in out]


def _mix(comps, rng) -> ComplexFn:
    w = rng.normal(size=len(comps)) + 1j * rng.normal(size=len(comps))
    out = comps[0] * complex(w[0])
    for c, x in zip(comps[1:], w[1:]):
        out = out + c * complex(x)
    return out


def _line_exponents(sig: ComplexFn, carrier: Carrier, direction) -> list[complex]:
    ks = range(-PENCIL_HALF, PENCIL_HALF + 1)
    if isinstance(carrier, RatAddCarrier):
        step = Fraction(1, 4)
        pts = [tuple(k * step * Fraction(v) for v in direction) for k in ks]
        enc = carrier.encode(pts)
        h = float(step)
    else:
        enc = np.exp(np.array([k * PENCIL_STEP for k in ks]))
        h = PENCIL_STEP
    return _cluster(_pencil(sig.evaluate(enc), h), h)


def _rat_candidates(sig: ComplexFn, carrier: RatAddCarrier) -> list[np.ndarray]:
    d = carrier.dim
    eye = np.eye(d, dtype=int)
    axes = [_line_exponents(sig, carrier, eye[j]) for j in range(d)]
    cands = [[u] for u in axes[0]]
    for j in range(1, d):
        diag = _line_exponents(sig, carrier, eye[0] + eye[j])
        nxt = []
        for b in cands:
            for v in axes[j]:
                if diag and min(abs(b[0] + v - w) for w in diag) < PAIR_TOL:
                    nxt.append(b + [v])
        cands = nxt
    return [np.array(b) for b in cands]


def _chars_from_params(carrier: Carrier, params: list[np.ndarray], extra: list[Character]) -> list[Character]:
    return [analytic_character(carrier, b) for b in params] + list(extra)


def recover_characters(comps, carrier: Carrier, seed: int = 0) -> list[Character]:
    """Candidate characters carrying the quadruple."""
    if isinstance(carrier, FiniteCarrier):
        return [ch for ch in enumerate_characters(carrier) if not ch.is_zero]
    rng = np.random.default_rng(seed)
    sig = _mix(comps, rng)
    extra: list[Character] = []
    if isinstance(carrier, RatAddCarrier):
        params = _rat_candidates(sig, carrier)
    elif isinstance(carrier, NonnegRealMulCarrier):
        params = [np.array([s]) for s in _line_exponents(sig, carrier, None)]
        at0 = max(abs(f(0.0)) for f in comps)
        if at0 > 1e-12 * max(f.max_abs() for f in comps):
            extra.append(analytic_character(carrier, form="one"))
    else:
        raise ClassificationError(f"unsupported carrier {carrier.kind}")
    if not params and not extra:
        raise ClassificationError("no stable character candidates")
    chars = _merge(_chars_from_params(carrier, params, extra))
    nf = decompose(comps, chars, range(len(comps)))
    return [ch for ch, k in zip(chars, _significant(nf)) if k]


def _degrees(nf: NormalForm) -> list[int]:
    """Highest significant polynomial degree next to each character."""
    top = max(float(np.abs(nf.const).max(initial=0)), float(np.abs(nf.lin).max(initial=0)),
              float(np.abs(nf.quad).max(initial=0)), 1e-300)
    out = []
    for k in range(len(nf.chars)):
        if np.abs(nf.quad[:, k]).max(initial=0) > PRUNE_TOL * top:
            out.append(2)
        elif np.abs(nf.lin[:, k]).max(initial=0) > PRUNE_TOL * top:
            out.append(1)
        else:
            out.append(0)
    return out


def normal_form(comps, chars: list[Character], names) -> NormalForm:
    """Decomposition with each character's polynomial degree trimmed to what the data needs."""
    nf = decompose(comps, chars, names)
    return decompose(comps, chars, names, _degrees(nf))


def _significant(nf: NormalForm) -> list[bool]:
    size = np.abs(nf.const).max(axis=0) + np.abs(nf.lin).reshape(nf.lin.shape[0], nf.lin.shape[1], -1).max(
        axis=(0, 2), initial=0
    ) + np.abs(nf.quad).reshape(nf.quad.shape[0], nf.quad.shape[1], -1).max(axis=(0, 2), initial=0)
    top = max(float(size.max(initial=0.0)), 1e-300)
    return [bool(s > PRUNE_TOL * top) for s in size]


def _merge(chars: list[Character]) -> list[Character]:
    out: list[Character] = []
    for ch in chars:
        if not any(characters_coincide(ch, o) for o in out):
            out.append(ch)
    return out


# ------------------------------------------------------------------ parameter read-off


def _ratio(u, v) -> complex:
    """Scalar r minimising |u - r v|."""
    u = np.ravel(u)
    v = np.ravel(v)
    den = np.vdot(v, v)
    if abs(den) == 0:
        raise DegenerateParameters("zero reference vector")
    return complex(np.vdot(v, u) / den)


def _sqrt_pm(z: complex) -> list[complex]:
    r = complex(np.sqrt(complex(z)))
    return [r, -r]


class _Reader:
    def __init__(self, nf: NormalForm, assign: dict[str, int], carrier: Carrier):
        self.nf, self.assign, self.carrier = nf, assign, carrier

    def k(self, comp: str, slot: str) -> complex:
        return complex(self.nf.const[self.nf.slot(comp), self.assign[slot]])

    def lin(self, comp: str, slot: str) -> np.ndarray:
        return self.nf.lin[self.nf.slot(comp), self.assign[slot]]

    def quad(self, comp: str, slot: str) -> np.ndarray:
        return self.nf.quad[self.nf.slot(comp), self.assign[slot]]

    def additive(self, alpha) -> AdditiveFn:
        return AdditiveFn(self.carrier, np.asarray(alpha, complex))


def _read(fid: str, r: _Reader, l1: complex, l2: complex) -> list[dict]:
    """Candidate scalar/additive assignments for one character assignment."""
    t = get_template(fid)
    out: list[dict] = []
    if fid == "p41.1":
        return [{"alpha": r.k("f", "chi1")}]
    if fid == "p41.2":
        return [{"A": r.additive(r.lin("f", "chi"))}]
    if fid == "p42.1":
        de = -_ratio(r.quad("h", "chi"), r.quad("f", "chi"))
        A1 = 2 * r.lin("f", "chi")
        return [{"delta": de, "A1": r.additive(A1), "A": r.additive(r.lin("h", "chi") + de * r.lin("f", "chi"))}]
    if fid == "p42.2":
        de = -_ratio(r.lin("h", "chi"), r.lin("f", "chi"))
        c = r.k("h", "mu") + de * r.k("f", "mu")
        return [{"delta": de, "c": c, "A": r.additive(-r.lin("f", "chi") / c)}]
    if fid == "p42.3":
        c = r.k("f", "mu")
        de = -r.k("h", "mu") / c
        for d in _sqrt_pm(1 / c):
            out.append({"c": c, "d": d, "delta": de, "A": r.additive(r.lin("f", "chi") / (c * d))})
        return out
    if fid == "p42.4":
        c = -r.k("f", "chi3") / 2
        b = r.k("f", "chi1") / c
        de = r.k("h", "chi3") / (2 * c)
        a = 1 / (2 * (r.k("h", "chi1") + de * c * b))
        return [{"c": c, "beta": b, "delta": de, "alpha": a}]
    if fid == "t1.1":
        return [{"A": r.additive(r.lin("f", "m")), "A1": r.additive(2 * r.lin("h", "m"))}]
    if fid == "t1.2":
        a = r.k("f", "mu")
        return [{"alpha": a, "A": r.additive(-r.lin("h", "m") / (a * l2))}]
    if fid == "t1.3":
        A = l2 * r.lin("f", "m")
        return [{"A": r.additive(A), "c": -_ratio(r.lin("h", "m"), A)}]
    if fid == "t1.4":
        d = -1 / (l2 * r.k("f", "mu"))
        return [{"d": d, "c": r.k("h", "mu"), "A": r.additive(d * r.lin("h", "m"))}]
    if fid == "t1.5":
        A = l2 * r.lin("f", "m")
        return [{"A": r.additive(A), "c": r.k("h", "mu"), "d": 1 / _ratio(r.lin("h", "m"), A)}]
    if fid in ("t1.6", "t1.7", "t1.8"):
        c = -r.k("h", "chi3") / 2
        b = r.k("h", "chi1") / c
        if fid == "t1.6":
            lam = 1 / (2 * l2 * r.k("f", "chi1"))
        elif fid == "t1.7":
            lam = 1 / (l2 * (2 - b) * r.k("f", "chi1"))
        else:
            lam = -1 / (l2 * b * r.k("f", "chi2"))
        return [{"c": c, "beta": b, "lam": lam}]
    if fid == "t2.1":
        de = -l1 * _ratio(r.quad("h", "chi"), r.quad("f", "chi"))
        A1 = 2 * r.lin("f", "chi")
        return [{"delta": de, "A1": r.additive(A1), "A": r.additive(l1 * r.lin("h", "chi") + de / 2 * A1)}]
    if fid == "t2.2":
        d1sq = -2 * _ratio(r.lin("g1", "chi"), r.lin("f", "chi"))
        for d1 in _sqrt_pm(d1sq):
            d2 = l1 * l2 / d1
            k = l1 / (l1 * d1 + d2 * d2)
            out.append({"delta1": d1, "delta2": d2, "A": r.additive(-r.lin("f", "chi") / k)})
        return out
    if fid == "t2.3":
        de = -l1 * _ratio(r.lin("h", "chi"), r.lin("f", "chi"))
        c = de * de / (de**3 + l1 * l2 * l2)
        return [{"delta": de, "c": c, "A": r.additive(-r.lin("f", "chi") / c)}]
    if fid == "t2.4":
        c = r.k("f", "mu")
        de = -l1 * r.k("h", "mu") / c
        for d in _sqrt_pm(1 / c):
            out.append({"c": c, "d": d, "delta": de, "A": r.additive(r.lin("f", "chi") / (c * d))})
        return out
    if fid.startswith("t2.5."):
        v = fid.split(".")[-1]
        c = -r.k("f", "chi3") / 2
        d = r.k("f", "chi1") / c
        sa, _, sc = T25_SLOTS[v]
        alpha = -r.k("h", sc) / 2
        sign = -1 if v in ("i", "iv", "v") else 1
        for d1 in _sqrt_pm((r.k("g1", "chi3") - 0.5) / c):
            den = 2 * (r.k("g1", "chi1") + 0.5 * d1 * d1 * c * d - d / 4)
            lam = d1 / den
            gamma = alpha * lam * l1 / (sign * c * l2)
            out.append({"c": c, "d": d, "lam": lam, "gamma": gamma})
        return out
    raise TemplateError(f"no read-off rule for {t.id}")


# ------------------------------------------------------------------ matching


@dataclass
class Match:
    family: str
    params: FamilyParams
    fit_residual: float
    equivalent: list = field(default_factory=list)  # [(family, params, fit_residual)]

    @property
    def families(self) -> list[str]:
        return [self.family] + [e[0] for e in self.equivalent]

    def entries(self) -> list[tuple[str, FamilyParams, float]]:
        return [(self.family, self.params, self.fit_residual)] + list(self.equivalent)


@dataclass
class Classification:
    matches: list[Match]
    characters: list[Character]
    misfit: float
    notes: list[str] = field(default_factory=list)
    swapped: bool = False

    @property
    def unmatched(self) -> bool:
        return not self.matches

    def family_ids(self) -> list[str]:
        return [f for m in self.matches for f in m.families]


def _observed(comps):
    _, enc = _grid(comps[0].carrier)
    obs = np.column_stack([f.evaluate(enc) for f in comps])
    return enc, obs, max(float(np.max(np.abs(obs))), 1e-300)


def _rebuild(fid: str, p: FamilyParams, enc) -> np.ndarray:
    inst = build_instance(fid, p, "effective", validate=False)
    return np.column_stack([f.evaluate(enc) for f in inst.components])


def rebuild_residual(fid: str, p: FamilyParams, comps) -> float:
    """Max pointwise gap between the rebuilt family instance and the quadruple, relative to its size."""
    enc, obs, scale = _observed(comps)
    return float(np.max(np.abs(obs - _rebuild(fid, p, enc))) / scale)


def _eq_constraints(fid: str):
    t = get_template(fid)
    return [c for c in t.constraints + t.adopted if c.kind == "eq"]


def _polish(fid: str, p: FamilyParams, comps, iters: int = 4) -> FamilyParams:
    """Gauss-Newton on read-off scalars and additive coordinates.

    The residual stacks the rebuild gap and the template's equality
    constraints; every map involved is holomorphic, so complex finite
    differences give the Jacobian.
    """
    enc, obs, scale = _observed(comps)
    skeys = list(p.scalars)
    akeys = list(p.additives)
    cons = _eq_constraints(fid)

    def pack(q):
        v = [q.scalars[k] for k in skeys]
        for k in akeys:
            v.extend(q.additives[k].alpha)
        return np.array(v, complex)

    def unpack(x):
        q = p.copy()
        q.scalars = {k: complex(x[i]) for i, k in enumerate(skeys)}
        i = len(skeys)
        for k in akeys:
            n = len(p.additives[k].alpha)
            q.additives[k] = AdditiveFn(p.additives[k].carrier, x[i : i + n].copy())
            i += n
        return q

    def resid(x):
        q = unpack(x)
        r = [((_rebuild(fid, q, enc) - obs) / scale).ravel()]
        full = complete_params(fid, q)
        for c in cons:
            terms = [complex(v) for v in c.terms(full)]
            r.append(np.array([sum(terms) / max(max(abs(v) for v in terms), 1e-300)]))
        return np.concatenate(r)

    x = pack(p)
    with np.errstate(all="ignore"):
        r = resid(x)
        for _ in range(iters):
            if np.max(np.abs(r)) <= 1e-14:
                break
            J = np.empty((len(r), len(x)), complex)
            for j in range(len(x)):
                h = 1e-7 * max(1.0, abs(x[j]))
                e = np.zeros(len(x), complex)
                e[j] = h
                J[:, j] = (resid(x + e) - r) / h
            dx, *_ = np.linalg.lstsq(J, -r, rcond=None)
            xn = x + dx
            rn = resid(xn)
            if not np.all(np.isfinite(rn)) or np.max(np.abs(rn)) >= np.max(np.abs(r)):
                break
            x, r = xn, rn
    return unpack(x)


def _constraints_ok(fid: str, p: FamilyParams) -> bool:
    return all(c.satisfied for c in validate_constraints(fid, p, tol=CONSTRAINT_TOL))


def _candidates_for(fid: str, nf: NormalForm, carrier: Carrier, l1, l2, chars):
    t = get_template(fid)
    n = len(t.characters)
    if len(chars) < n:
        return
    for perm in itertools.permutations(range(len(chars)), n):
        assign = dict(zip(t.characters, perm))
        if t.psi_slot and _char_degree(chars[assign[t.psi_slot]]) == 0:
            continue
        r = _Reader(nf, assign, carrier)
        try:
            with np.errstate(all="ignore"):
                reads = _read(fid, r, l1, l2)
        except (DegenerateParameters, ZeroDivisionError, FloatingPointError):
            continue
        for rd in reads:
            p = FamilyParams(lambda1=complex(l1), lambda2=complex(l2))
            p.characters = {s: chars[i] for s, i in assign.items()}
            for k, v in rd.items():
                if isinstance(v, AdditiveFn):
                    p.additives[k] = v
                else:
                    p.scalars[k] = complex(v)
            if not all(np.isfinite(v) for v in p.scalars.values()):
                continue
            if any(not np.all(np.isfinite(a.alpha)) for a in p.additives.values()):
                continue
            yield p


def _plausible(fid: str, p: FamilyParams) -> bool:
    """Cheap screen: read-off scalars must already nearly satisfy the equality constraints."""
    try:
        full = complete_params(fid, p)
        return all(c.measure(full)[1] <= POLISH_GATE for c in _eq_constraints(fid))
    except (DegenerateParameters, ZeroDivisionError, KeyError):
        return False


def _safe_residual(fid, p, comps) -> float:
    try:
        with np.errstate(all="ignore"):
            r = rebuild_residual(fid, p, comps)
    except (DegenerateParameters, ZeroDivisionError, TemplateError):
        return float("inf")
    return r if np.isfinite(r) else float("inf")


def _fits(fid: str, comps, chars, l1, l2, nf) -> list[tuple[FamilyParams, float]]:
    """Polished (params, fit_residual) for every read-off candidate that lands near the quadruple."""
    out = []
    for p in _candidates_for(fid, nf, comps[0].carrier, l1, l2, chars):
        if not _plausible(fid, p):
            continue
        r = _safe_residual(fid, p, comps)
        if POLISH_SKIP < r <= POLISH_GATE:
            try:
                q = _polish(fid, p, comps)
            except (DegenerateParameters, ZeroDivisionError, TemplateError):
                q = p
            rq = _safe_residual(fid, q, comps)
            if rq < r:
                p, r = q, rq
        out.append((p, r))
    return out


def fit_template(fid: str, comps, candidates: list[Character], lambda1=0j, lambda2=0j):
    """Best (params, fit_residual) over character assignments; residual is inf when nothing fits."""
    t = get_template(fid)
    comps = tuple(comps)
    if len(comps) != t.arity:
        raise TemplateError(f"{fid} has {t.arity} components, got {len(comps)}")
    nf = normal_form(comps, candidates, t.components)
    best_p, best_r = None, float("inf")
    for p, r in _fits(fid, comps, candidates, lambda1, lambda2, nf):
        if r < best_r:
            best_p, best_r = p, r
    if best_p is not None:
        best_p = complete_params(fid, best_p)
    return best_p, best_r


def complete_params(fid: str, p: FamilyParams) -> FamilyParams:
    t = get_template(fid)
    return t.derive(p) if t.derive is not None else p



# gauge maps: character relabelling plus scalar substitutions leaving the instance unchanged
def _gauges(fid: str):
    swap = {"chi1": "chi2", "chi2": "chi1"}
    if fid == "p41.1":
        return [(swap, lambda s: {**s, "alpha": -s["alpha"]})]
    if fid == "p42.4":
        return [(swap, lambda s: {**s, "beta": 2 - s["beta"], "alpha": -s["alpha"]})]
    if fid == "t1.6":
        return [(swap, lambda s: {**s, "beta": 2 - s["beta"], "lam": -s["lam"]})]
    if fid in ("t2.5.i", "t2.5.ii"):
        return [(swap, lambda s: {**s, "d": 2 - s["d"], "lam": -s["lam"], "gamma": -s["gamma"]})]
    return []


def _key(fid: str, p: FamilyParams) -> tuple:
    out = []
    for k in get_template(fid).scalars:
        if k in p.scalars:
            z = p.scalars[k]
            out += [round(z.real, 6), round(z.imag, 6)]
    return tuple(out)


def canonical_params(fid: str, p: FamilyParams) -> FamilyParams:
    """Gauge-orbit representative: the first scalar that the gauge moves is made lexicographically largest."""
    p = complete_params(fid, p)
    orbit = [p]
    for relabel, sub in _gauges(fid):
        q = p.copy()
        q.characters = {relabel.get(k, k): v for k, v in p.characters.items()}
        q.scalars = {k: complex(v) for k, v in sub(dict(p.scalars)).items()}
        orbit.append(complete_params(fid, q))
    return max(orbit, key=lambda q: _key(fid, q))


def same_params(fid: str, a: FamilyParams, b: FamilyParams, tol: float = 1e-6) -> bool:
    """Canonical scalars agree to tol relative to max(1, |value|)."""
    ca, cb = canonical_params(fid, a), canonical_params(fid, b)
    keys = set(ca.scalars) | set(cb.scalars)
    if any(k not in ca.scalars or k not in cb.scalars for k in keys):
        return False
    return all(abs(ca.scalars[k] - cb.scalars[k]) <= tol * max(1.0, abs(cb.scalars[k])) for k in keys)


def _candidate_families(arity: int, l1: complex, l2: complex) -> list[str]:
    group = {2: "p41", 3: "p42"}.get(arity)
    if group is None:
        group = "t1" if l1 == 0 else "t2"
    return [f for f in FAMILY_IDS if get_template(f).group == group]


def _group(matches: list[Match]) -> list[Match]:
    """Collapse matches from one overlap class into a single entry headed by the best fit."""
    out: list[Match] = []
    for m in matches:
        cls = next((c for c in EQUIVALENCE_CLASSES if m.family in c), None)
        host = None if cls is None else next((o for o in out if o.family in cls), None)
        if host is None:
            out.append(m)
        else:
            host.equivalent.append((m.family, m.params, m.fit_residual))
    return out


def classify_quadruple(comps, lambda1=0j, lambda2=0j, carrier: Carrier | None = None, tol: float | None = None):
    """All catalog families reproducing the given solution, with recovered parameters."""
    comps = tuple(comps)
    tol = default_tol() if tol is None else tol
    carrier = carrier or comps[0].carrier
    l1, l2 = complex(lambda1), complex(lambda2)
    arity = len(comps)
    if arity not in (2, 3, 4):
        raise ClassificationError("expected 2, 3 or 4 component functions")
    rep = component_residual(comps, l1, l2)
    if rep.relative > tol:
        raise ClassificationError(f"not a solution: relative residual {rep.relative:.3e}")
    if arity == 2:
        if comps[0].max_abs() == 0:
            raise ClassificationError("hypothesis violated: f = 0")
    elif not linear_independence(comps[0], comps[2]):
        raise ClassificationError("hypothesis violated: f and h are linearly dependent")
    notes = []
    swapped = arity == 4 and l2 == 0 and l1 != 0
    if swapped:
        comps = (comps[2], comps[3], comps[0], comps[1])
        l1, l2 = l2, l1
        notes.append("lambda2 = 0: classified after exchanging the two equations")
    if not check_square_generated(carrier).all_reachable:
        notes.append("carrier is not generated by its squares; the catalog's hypothesis fails")
    try:
        chars = recover_characters(comps, carrier)
    except ClassificationError as e:
        chars = []
        notes.append(str(e))
    families = _candidate_families(arity, l1, l2)
    nf = normal_form(comps, chars, get_template(families[0]).components)
    found: list[Match] = []
    for fid in families:
        seen = set()
        for p, r in _fits(fid, comps, chars, l1, l2, nf):
            if r > tol or not _constraints_ok(fid, p):
                continue
            cp = canonical_params(fid, p)
            k = _key(fid, cp)
            if k not in seen:
                seen.add(k)
                found.append(Match(fid, cp, r))
    found.sort(key=lambda m: (m.fit_residual, FAMILY_IDS.index(m.family)))
    out = Classification(_group(found), chars, nf.misfit, notes, swapped)
    if out.unmatched:
        out.notes.append("potential counterexample / unreachable regime: verified solution matches no template")
    return out
