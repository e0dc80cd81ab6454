"""Natural transformations of the forgetful functor, stored per irrep.

A natural transformation is determined by its blocks ``a^rho_{u,v}`` (shape
``d_v x d_u``) on the irreps; on any other representation it is obtained by
conjugating the block-diagonal ``sum_rho a^rho (x) I_m`` with the isotypic
unitaries of a decomposition.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ShapeError
from .reps import Decomposition, Dual, GroupoidRep, Intertwiner, Label, block_diag, decompose

Key = tuple[Label, int, int]


@dataclass(frozen=True)
class Check:
    """Outcome of a tolerance check; truthy iff it passed."""

    ok: bool
    residual: float

    def __bool__(self):
        return self.ok


def block_layout(dual: Dual) -> list[tuple[Key, tuple[int, int]]]:
    """Every (label, u, v) with u, v in the label's component, with its block shape."""
    out = []
    for label in dual.labels:
        units = dual.component_units(label[0])
        for u in units:
            for v in units:
                out.append(((label, u, v), (dual.dim(label, v), dual.dim(label, u))))
    return out


class NaturalTransformation:
    """Blocks keyed by ``(label, u, v)``; a missing key is a zero block."""

    def __init__(self, dual: Dual, blocks: dict[Key, np.ndarray]):
        self.dual = dual
        self.blocks = blocks

    def block(self, label: Label, u: int, v: int) -> np.ndarray:
        key = (tuple(label), u, v)
        if key in self.blocks:
            return self.blocks[key]
        return np.zeros((self.dual.dim(label, v), self.dual.dim(label, u)), dtype=complex)

    def to_vector(self) -> np.ndarray:
        parts = [self.block(*key).ravel() for key, _ in block_layout(self.dual)]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)

    @classmethod
    def from_vector(cls, dual: Dual, vec: np.ndarray) -> "NaturalTransformation":
        blocks = {}
        pos = 0
        for key, shape in block_layout(dual):
            n = shape[0] * shape[1]
            blocks[key] = np.array(vec[pos:pos + n], dtype=complex).reshape(shape)
            pos += n
        return cls(dual, blocks)

    def support_pairs(self) -> list[tuple[int, int]]:
        """Unit pairs carrying at least one nonzero block."""
        pairs = {(u, v) for (l, u, v), m in self.blocks.items() if m.size and np.any(m != 0)}
        return sorted(pairs)

    def _combine(self, other, op):
        keys = set(self.blocks) | set(other.blocks)
        return NaturalTransformation(self.dual, {k: op(self.block(*k), other.block(*k)) for k in keys})

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, scalar):
        return NaturalTransformation(self.dual, {k: scalar * m for k, m in self.blocks.items()})

    __rmul__ = __mul__

    def distance(self, other) -> float:
        d = self.to_vector() - other.to_vector()
        return float(np.abs(d).max(initial=0.0))

    def __repr__(self):
        return f"NaturalTransformation({len(self.blocks)} blocks)"


def from_blocks(dual: Dual, blocks: dict) -> NaturalTransformation:
    """Natural transformation with prescribed irrep blocks (the inverse of q)."""
    shapes = dict(block_layout(dual))
    out = {}
    for key, m in blocks.items():
        label, u, v = key
        key = (tuple(label), int(u), int(v))
        m = np.asarray(m, dtype=complex)
        want = shapes.get(key)
        if want is None:
            if m.size:
                raise ShapeError(f"no block at {key}: units outside the irrep's component")
            continue
        if m.shape != want:
            raise ShapeError(f"block {key} has shape {m.shape}, expected {want}")
        out[key] = m
    return NaturalTransformation(dual, out)


def zero(dual: Dual) -> NaturalTransformation:
    return NaturalTransformation(dual, {})


def identity(dual: Dual) -> NaturalTransformation:
    blocks = {}
    for label in dual.labels:
        for u in dual.component_units(label[0]):
            blocks[(label, u, u)] = np.eye(dual.dim(label, u), dtype=complex)
    return NaturalTransformation(dual, blocks)


def random_nt(dual: Dual, rng: np.random.Generator) -> NaturalTransformation:
    blocks = {}
    for key, shape in block_layout(dual):
        blocks[key] = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return NaturalTransformation(dual, blocks)


def extend(a: NaturalTransformation, pi: GroupoidRep, dec: Decomposition, uv: tuple[int, int]) -> np.ndarray:
    """a^pi_{u,v} = C_v (sum_rho a^rho_{u,v} (x) I_m) C_u^*."""
    if dec.rep is not pi:
        raise ShapeError("decomposition does not belong to this representation")
    u, v = uv
    parts = [np.kron(a.block(l, u, v), np.eye(m)) for l, m in dec.multiplicities.items() if m]
    mid = block_diag(parts, shape_hint=(pi.dims[v], pi.dims[u]))
    return dec.unitaries[v] @ mid @ dec.unitaries[u].conj().T


def naturality_check(a: NaturalTransformation, pi1: GroupoidRep, pi2: GroupoidRep, h: Intertwiner,
                     dec1: Decomposition | None = None, dec2: Decomposition | None = None) -> float:
    """max_{u,v} |h_v a^{pi1}_{u,v} - a^{pi2}_{u,v} h_u|."""
    dec1 = dec1 or decompose(pi1, a.dual)
    dec2 = dec2 or decompose(pi2, a.dual)
    worst = 0.0
    g = pi1.groupoid
    for u in g.units:
        for v in g.units:
            lhs = h.blocks[v] @ extend(a, pi1, dec1, (u, v))
            rhs = extend(a, pi2, dec2, (u, v)) @ h.blocks[u]
            if lhs.size:
                worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def t_of_x(dual: Dual, x: int) -> NaturalTransformation:
    """Blocks rho(x) at (src x, rng x); zero everywhere else."""
    g = dual.groupoid
    u, v = int(g.src[x]), int(g.rng[x])
    return NaturalTransformation(dual, {(l, u, v): dual[l].rep(x) for l in dual.labels_at(u)})


def involution(a: NaturalTransformation) -> NaturalTransformation:
    """conj-bar: abar^rho_{u,v} = conj(a^{conj rho}_{u,v})."""
    dual = a.dual
    blocks = {}
    pairs = {(u, v) for (_, u, v) in a.blocks}
    for label in dual.labels:
        _, dec = dual.conjugate_pair(label)
        for u, v in pairs:
            if dual.dim(label, u) and dual.dim(label, v):
                blocks[(label, u, v)] = extend(a, dec.rep, dec, (u, v)).conj()
    return NaturalTransformation(dual, blocks)


def is_hermitian(a: NaturalTransformation, tol: float = 1e-8) -> Check:
    res = a.distance(involution(a))
    return Check(res < tol, res)


def monoidal_residual(a: NaturalTransformation, pairs: Iterable[tuple[int, int]] | None = None) -> float:
    dual = a.dual
    worst = 0.0
    for u, v in (a.support_pairs() if pairs is None else pairs):
        c = int(dual.groupoid.component_of[u])
        if c != int(dual.groupoid.component_of[v]):
            continue
        labels = dual.labels_of_component(c)
        worst = max(worst, float(np.abs(a.block(dual.trivial_label(c), u, v) - 1).max()))
        for l1 in labels:
            for l2 in labels:
                dec = dual.tensor_decomposition(l1, l2)
                lhs = np.kron(a.block(l1, u, v), a.block(l2, u, v))
                rhs = extend(a, dec.rep, dec, (u, v))
                worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def is_monoidal(a: NaturalTransformation, tol: float = 1e-8) -> Check:
    """Tensor-preserving on every irrep pair, with trivial block 1 wherever a is nonzero."""
    res = monoidal_residual(a)
    return Check(res < tol, res)


def unitarity_residual(a: NaturalTransformation) -> float:
    worst = 0.0
    for (l, u, v), m in a.blocks.items():
        if m.size and np.any(m != 0):
            worst = max(worst, float(np.abs(m.conj().T @ m - np.eye(m.shape[1])).max()))
    return worst


# ----------------------------------------------------------------------------
# center

def _commutation_rows(dual: Dual, label: Label, order: str):
    """Linear constraints on the blocks of one irrep from all matrix-unit probes b."""
    units = dual.component_units(label[0])
    d = dual.dim(label, units[0])
    n = len(units)
    pos = {u: i for i, u in enumerate(units)}
    size = d * d

    def col(u, v):
        # offset of a_{u,v} inside this label's unknowns (layout order: u outer, v inner)
        return (pos[u] * n + pos[v]) * size

    eye = np.eye(d)
    rows = []
    for p in units:
        for q in units:
            for i in range(d):
                for j in range(d):
                    b = {(p, q): np.zeros((d, d))}
                    b[(p, q)][i, j] = 1.0
                    for u in units:
                        for v in units:
                            buv = b.get((u, v))
                            bvu = b.get((v, u))
                            if buv is None and bvu is None:
                                continue
                            buv = np.zeros((d, d)) if buv is None else buv
                            bvu = np.zeros((d, d)) if bvu is None else bvu
                            row = np.zeros((size, n * n * size), dtype=complex)
                            if order == "a_first":
                                # b_{v,u} a_{u,v} - a_{v,u} b_{u,v}
                                row[:, col(u, v):col(u, v) + size] += np.kron(bvu, eye)
                                row[:, col(v, u):col(v, u) + size] -= np.kron(eye, buv.T)
                            else:
                                # a_{u,v} b_{v,u} - b_{u,v} a_{v,u}
                                row[:, col(u, v):col(u, v) + size] += np.kron(eye, bvu.T)
                                row[:, col(v, u):col(v, u) + size] -= np.kron(buv, eye)
                            rows.append(row)
    return np.vstack(rows)


def center_basis(dual: Dual, order: str = "a_first") -> list[NaturalTransformation]:
    """Orthonormal basis of the elements commuting with every natural transformation.

    ``order`` picks how the composite in the commutation identity is read:
    ``"a_first"`` applies a then b; ``"b_first"`` the reverse.
    """
    from .reps import null_space

    if order not in ("a_first", "b_first"):
        raise ValueError(f"unknown order {order!r}")
    layout = block_layout(dual)
    offsets = {}
    pos = 0
    for key, shape in layout:
        offsets[key] = pos
        pos += shape[0] * shape[1]
    total = pos
    basis = []
    for label in dual.labels:
        units = dual.component_units(label[0])
        start = offsets[(label, units[0], units[0])]
        ns = null_space(_commutation_rows(dual, label, order))
        for vec in ns.T:
            full = np.zeros(total, dtype=complex)
            full[start:start + len(vec)] = vec
            basis.append(NaturalTransformation.from_vector(dual, full))
    return basis


def canonical_central(dual: Dual) -> list[NaturalTransformation]:
    """id_rho: identity on the diagonal pairs of rho's support, zero elsewhere."""
    out = []
    for label in dual.labels:
        blocks = {(label, u, u): np.eye(dual.dim(label, u), dtype=complex)
                  for u in dual.component_units(label[0])}
        out.append(NaturalTransformation(dual, blocks))
    return out


def commutation_residual(a: NaturalTransformation, b: NaturalTransformation, order: str = "a_first") -> float:
    dual = a.dual
    worst = 0.0
    for label in dual.labels:
        units = dual.component_units(label[0])
        for u in units:
            for v in units:
                if order == "a_first":
                    lhs = b.block(label, v, u) @ a.block(label, u, v)
                    rhs = a.block(label, v, u) @ b.block(label, u, v)
                else:
                    lhs = a.block(label, u, v) @ b.block(label, v, u)
                    rhs = b.block(label, u, v) @ a.block(label, v, u)
                if lhs.size:
                    worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def action_commutation_residuals(a: NaturalTransformation, form: str = "printed") -> dict[Label, float]:
    """Per irrep residual of a commuting with the groupoid action.

    ``"printed"``: max |a_{v,u} rho(x) - rho(x^{-1}) a_{u,v}| over x in G_u^v.
    ``"intertwiner"``: max |a_{v,v} rho(x) - rho(x) a_{u,u}|, i.e. the
    diagonal blocks form an element of Mor(rho, rho).
    """
    if form not in ("printed", "intertwiner"):
        raise ValueError(f"unknown form {form!r}")
    dual = a.dual
    g = dual.groupoid
    out = {}
    for label in dual.labels:
        rho = dual[label].rep
        worst = 0.0
        for u in dual.component_units(label[0]):
            for v in dual.component_units(label[0]):
                for x in g.fiber(u, v):
                    if form == "printed":
                        diff = a.block(label, v, u) @ rho(x) - rho(g.inv[x]) @ a.block(label, u, v)
                    else:
                        diff = a.block(label, v, v) @ rho(x) - rho(x) @ a.block(label, u, u)
                    worst = max(worst, float(np.abs(diff).max()))
        out[label] = worst
    return out


def center_report(dual: Dual, probes: int = 100, seed=0) -> dict:
    """Computed center dimension against the claimed |dual|, with containment checks."""
    basis = center_basis(dual)
    basis_b = center_basis(dual, order="b_first")
    mat = np.array([b.to_vector() for b in basis]).T
    containment = 0.0
    for c in canonical_central(dual):
        vec = c.to_vector()
        coef, *_ = np.linalg.lstsq(mat, vec, rcond=None)
        containment = max(containment, float(np.abs(mat @ coef - vec).max()))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(probes):
        b = random_nt(dual, rng)
        for a in basis:
            worst = max(worst, commutation_residual(a, b), commutation_residual(a, b, "b_first"))
    action = [action_commutation_residuals(a) for a in basis]
    intertwining = [action_commutation_residuals(a, "intertwiner") for a in basis]
    return {
        "computed": len(basis),
        "computed_other_order": len(basis_b),
        "claimed": len(dual),
        "containment_residual": containment,
        "commutation_residual": worst,
        # quantifier readings of the action-commutation criterion
        "action_exists_residual": max((min(r.values()) for r in action), default=0.0),
        "action_forall_residual": max((max(r.values()) for r in action), default=0.0),
        "action_intertwiner_residual": max((max(r.values()) for r in intertwining), default=0.0),
    }


# ----------------------------------------------------------------------------
# averaged forms

def g_form(dual: Dual, label: Label, u: int) -> np.ndarray:
    """Matrix of the isotropy-averaged form: sum_{x in G_u^u} w(x) rho(x)."""
    g = dual.groupoid
    fib = g.fiber(u, u)
    rho = dual[label].rep
    w = dual.haar.weight
    return sum(w[x] * rho(x) for x in fib)


def g_preservation(a: NaturalTransformation, tol: float = 1e-12) -> float:
    """max |(a^rho_{u,v})^* g_v a^rho_{u,v} - g_u| over blocks with norm above ``tol``."""
    dual = a.dual
    worst = 0.0
    for (label, u, v), m in a.blocks.items():
        if m.size == 0 or np.abs(m).max() <= tol:
            continue
        gu, gv = g_form(dual, label, u), g_form(dual, label, v)
        worst = max(worst, float(np.abs(m.conj().T @ gv @ m - gu).max()))
    return worst
