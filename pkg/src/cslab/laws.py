"""Residuals of the sine, cosine, cosine-sine laws and of the coupled system over window pairs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .funcspace import ComplexFn, linear_independence


@dataclass(frozen=True)
class EquationResidual:
    name: str
    max_abs: float
    scale: float
    argmax: int
    values: np.ndarray = field(repr=False)

    @property
    def relative(self) -> float:
        return self.max_abs / self.scale if self.scale > 0 else self.max_abs


@dataclass(frozen=True)
class ResidualReport:
    """Per-equation maxima over all ordered window pairs."""

    per_equation: tuple[EquationResidual, ...]
    argmax_pair: tuple
    independent: bool | None = None

    @property
    def max_abs(self) -> float:
        return max(e.max_abs for e in self.per_equation)

    @property
    def scale(self) -> float:
        return max(e.scale for e in self.per_equation)

    @property
    def relative(self) -> float:
        return max(e.relative for e in self.per_equation)

    @property
    def r1(self) -> float:
        return self.per_equation[0].relative

    @property
    def r2(self) -> float:
        return self.per_equation[1].relative if len(self.per_equation) > 1 else 0.0

    def to_json(self, carrier) -> dict:
        out: dict[str, Any] = {
            "r1": self.per_equation[0].relative,
            "r2": self.r2,
            "argmax": [carrier.element_json(v) for v in self.argmax_pair],
            "independent": self.independent,
            "scale": self.scale,
            "max_abs": self.max_abs,
            "per_equation": {e.name: {"max_abs": e.max_abs, "relative": e.relative} for e in self.per_equation},
        }
        return out


def _equation(name: str, F: ComplexFn, G: ComplexFn, H: ComplexFn | None, coupling: complex) -> EquationResidual:
    """F(xy) - F(x)G(y) - G(x)F(y) - coupling*H(x)H(y), scaled by the largest term magnitude."""
    s = F.carrier.sweep
    fxy = F.evaluate(s.xy)
    fx, fy = F.evaluate(s.x), F.evaluate(s.y)
    gx, gy = G.evaluate(s.x), G.evaluate(s.y)
    t1 = fx * gy
    t2 = gx * fy
    r = fxy - t1 - t2
    scale = np.maximum(np.abs(fxy), np.maximum(np.abs(t1), np.abs(t2)))
    if H is not None:
        t3 = coupling * H.evaluate(s.x) * H.evaluate(s.y)
        r = r - t3
        scale = np.maximum(scale, np.abs(t3))
    a = np.abs(r)
    k = int(np.argmax(a)) if len(a) else 0
    return EquationResidual(name, float(a[k]) if len(a) else 0.0, float(np.max(scale, initial=0.0)), k, r)


def _report(eqs: list[EquationResidual], carrier, independent=None) -> ResidualReport:
    worst = max(eqs, key=lambda e: e.max_abs)
    return ResidualReport(tuple(eqs), carrier.sweep.pairs[worst.argmax], independent)


def residual_sine(f: ComplexFn, g: ComplexFn) -> ResidualReport:
    """f(xy) = f(x)g(y) + g(x)f(y)."""
    return _report([_equation("sine", f, g, None, 0)], f.carrier)


def residual_cosine_sine(f: ComplexFn, g: ComplexFn, h: ComplexFn) -> ResidualReport:
    """f(xy) = f(x)g(y) + g(x)f(y) + h(x)h(y)."""
    return _report([_equation("cosine-sine", f, g, h, 1)], f.carrier, bool(linear_independence(f, h)))


def residual_cosine(f: ComplexFn, g: ComplexFn) -> ResidualReport:
    """f(xy) = f(x)f(y) + g(x)g(y)."""
    s = f.carrier.sweep
    fxy = f.evaluate(s.xy)
    t1 = f.evaluate(s.x) * f.evaluate(s.y)
    t2 = g.evaluate(s.x) * g.evaluate(s.y)
    r = fxy - t1 - t2
    a = np.abs(r)
    k = int(np.argmax(a))
    scale = float(np.max(np.maximum(np.abs(fxy), np.maximum(np.abs(t1), np.abs(t2)))))
    return _report([EquationResidual("cosine", float(a[k]), scale, k, r)], f.carrier)


def residual_system(
    f: ComplexFn, g1: ComplexFn, h: ComplexFn, g2: ComplexFn, lambda1: complex, lambda2: complex
) -> ResidualReport:
    """Both equations of the coupled system; also reports independence of (f, h)."""
    e1 = _equation("eq1", f, g1, h, complex(lambda1) ** 2)
    e2 = _equation("eq2", h, g2, f, complex(lambda2) ** 2)
    return _report([e1, e2], f.carrier, bool(linear_independence(f, h)))


def swap_system(f, g1, h, g2, lambda1, lambda2):
    """Exchange the roles of the two equations."""
    return h, g2, f, g1, lambda2, lambda1
