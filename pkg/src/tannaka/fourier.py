"""Fiberwise Fourier transform on a finite groupoid.

Functions on the groupoid are plain complex arrays indexed by arrow id.  The
transform of ``f`` at ``(rho, (u, v))`` is

    coef = sum_{x in G_u^v} w(x) f(x) rho(x^{-1})        (shape d_u x d_v)

and the inversion on G_u^v is ``f(x) = sum_rho d_u^rho Tr(coef rho(x))``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .groupoid import FiniteGroupoid, HaarSystem
from .natural import NaturalTransformation
from .reps import Dual, GroupoidRep, Label

CoefKey = tuple[Label, int, int]


@dataclass(eq=False)
class FourierCoefficients:
    """coef[(label, u, v)] in B(H_v, H_u), stored unflipped."""

    dual: Dual
    coef: dict[CoefKey, np.ndarray]

    def __getitem__(self, key: CoefKey) -> np.ndarray:
        label, u, v = key
        key = (tuple(label), u, v)
        if key in self.coef:
            return self.coef[key]
        return np.zeros((self.dual.dim(label, u), self.dual.dim(label, v)), dtype=complex)

    def max_abs_diff(self, other: "FourierCoefficients") -> float:
        keys = set(self.coef) | set(other.coef)
        return max((float(np.abs(self[k] - other[k]).max(initial=0.0)) for k in keys), default=0.0)


def fourier(g: FiniteGroupoid, haar: HaarSystem, dual: Dual, f: np.ndarray,
            fibers: list[tuple[int, int]] | None = None) -> FourierCoefficients:
    f = np.asarray(f, dtype=complex)
    if f.shape != (g.n_arrows,):
        raise ShapeError(f"function must have one value per arrow ({g.n_arrows}), got {f.shape}")
    coef = {}
    for u, v in (g.nonempty_fibers() if fibers is None else fibers):
        fib = g.fiber(u, v)
        wf = haar.weight[fib] * f[fib]
        for label in dual.labels_at(u):
            rho = dual[label].rep
            coef[(label, u, v)] = np.einsum("x,xij->ij", wf, np.stack([rho(g.inv[x]) for x in fib]))
    return FourierCoefficients(dual, coef)


def fourier_on_rep(g: FiniteGroupoid, haar: HaarSystem, f: np.ndarray, pi: GroupoidRep,
                   uv: tuple[int, int]) -> np.ndarray:
    """The same transform evaluated on an arbitrary representation, by direct summation."""
    u, v = uv
    fib = g.fiber(u, v)
    out = np.zeros((pi.dims[u], pi.dims[v]), dtype=complex)
    for x in fib:
        out += haar.weight[x] * f[x] * pi(g.inv[x])
    return out


def inverse_fourier(dual: Dual, coef: FourierCoefficients, uv: tuple[int, int]) -> np.ndarray:
    """f on G_u^v (zero elsewhere) from its coefficients at (u, v)."""
    g = dual.groupoid
    u, v = uv
    f = np.zeros(g.n_arrows, dtype=complex)
    for x in g.fiber(u, v):
        f[x] = sum(dual.dim(l, u) * np.trace(coef[(l, u, v)] @ dual[l].rep(x)) for l in dual.labels_at(u))
    return f


def as_natural_transformation(coef: FourierCoefficients) -> NaturalTransformation:
    """Index flip: the natural-transformation block at (u, v) is coef at (v, u)."""
    blocks = {(label, v, u): m for (label, u, v), m in coef.coef.items()}
    return NaturalTransformation(coef.dual, blocks)


def convolve(g: FiniteGroupoid, haar: HaarSystem, f1: np.ndarray, f2: np.ndarray,
             uwv: tuple[int, int, int]) -> np.ndarray:
    """(f1 * f2)(x) = sum_{y in G_w^v} w(y) f1(y) f2(y^{-1} x) for x in G_u^v.

    ``f1`` is read on G_w^v and ``f2`` on G_u^w.  The transform turns this into
    ``coef(f1 * f2)[u, v] = coef(f2)[u, w] @ coef(f1)[w, v]``.
    """
    u, w, v = uwv
    outer, inner, target = g.fiber(w, v), g.fiber(u, w), g.fiber(u, v)
    if len(outer) == 0 or len(inner) == 0 or len(target) == 0:
        raise ValueError(f"fibers for ({u}, {w}, {v}) are not all nonempty")
    out = np.zeros(g.n_arrows, dtype=complex)
    for x in target:
        out[x] = sum(haar.weight[y] * f1[y] * f2[g.comp[g.inv[y], x]] for y in outer)
    return out


def random_coefficients(dual: Dual, uv: tuple[int, int], seed) -> FourierCoefficients:
    rng = np.random.default_rng(seed)
    u, v = uv
    coef = {}
    for label in dual.labels_at(u):
        shape = (dual.dim(label, u), dual.dim(label, v))
        coef[(label, u, v)] = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return FourierCoefficients(dual, coef)


def random_trig_poly(dual: Dual, uv: tuple[int, int], seed) -> np.ndarray:
    """Inverse transform of seeded Gaussian coefficients on one fiber."""
    if len(dual.groupoid.fiber(*uv)) == 0:
        raise ValueError(f"fiber {uv} is empty")
    return inverse_fourier(dual, random_coefficients(dual, uv, seed), uv)


def to_json(f: np.ndarray) -> dict[str, list[float]]:
    return {str(i): [float(z.real), float(z.imag)] for i, z in enumerate(f) if z != 0}


def from_json(data: dict, n_arrows: int) -> np.ndarray:
    f = np.zeros(n_arrows, dtype=complex)
    for key, (re, im) in data.items():
        f[int(key)] = complex(re, im)
    return f
