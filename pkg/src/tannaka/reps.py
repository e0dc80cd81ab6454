"""Representations of finite groupoids and the unitary dual.

A representation assigns a coordinate space of dimension ``dims[u]`` to every
unit and a ``dims[rng(x)] x dims[src(x)]`` matrix to every arrow.  Irreducible
ones are induced from isotropy irreps along a transversal.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import DecompositionError, ShapeError
from .groupoid import FiniteGroupoid, HaarSystem, components, haar, isotropy, transversal
from .irreps import GroupRep, group_irreps, haar_unitary

Label = tuple[int, int]


@dataclass(frozen=True, eq=False)
class GroupoidRep:
    groupoid: FiniteGroupoid
    dims: tuple[int, ...]
    mats: tuple[np.ndarray, ...]

    def __call__(self, x: int) -> np.ndarray:
        return self.mats[x]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def functoriality_residual(self) -> float:
        g = self.groupoid
        worst = 0.0
        for u in g.units:
            if self.dims[u]:
                worst = max(worst, float(np.abs(self.mats[u] - np.eye(self.dims[u])).max()))
        xs, ys = np.nonzero(g.comp >= 0)
        for x, y in zip(xs, ys):
            m = self.mats[g.comp[x, y]]
            if m.size:
                worst = max(worst, float(np.abs(m - self.mats[x] @ self.mats[y]).max()))
        return worst

    def unitarity_residual(self) -> float:
        g = self.groupoid
        worst = 0.0
        for x in g.arrows:
            m = self.mats[x]
            if m.size:
                worst = max(worst, float(np.abs(self.mats[g.inv[x]] - m.conj().T).max()))
                worst = max(worst, float(np.abs(m @ m.conj().T - np.eye(m.shape[0])).max()))
        return worst

    def check_shapes(self):
        g = self.groupoid
        if len(self.dims) != g.n_units or len(self.mats) != g.n_arrows:
            raise ShapeError("representation does not match the groupoid size")
        for x, m in enumerate(self.mats):
            want = (self.dims[g.rng[x]], self.dims[g.src[x]])
            if m.shape != want:
                raise ShapeError(f"arrow {x}: matrix shape {m.shape}, expected {want}")


@dataclass(frozen=True, eq=False)
class Irrep:
    label: Label
    rep: GroupoidRep
    sigma: GroupRep  # the isotropy irrep at the base unit

    @property
    def component(self) -> int:
        return self.label[0]


@dataclass(frozen=True, eq=False)
class Intertwiner:
    """Per-unit blocks h_u : H_u^{pi1} -> H_u^{pi2}."""

    blocks: tuple[np.ndarray, ...]

    def residual(self, pi1: GroupoidRep, pi2: GroupoidRep) -> float:
        g = pi1.groupoid
        worst = 0.0
        for x in g.arrows:
            lhs = self.blocks[g.rng[x]] @ pi1(x)
            rhs = pi2(x) @ self.blocks[g.src[x]]
            if lhs.size:
                worst = max(worst, float(np.abs(lhs - rhs).max()))
        return worst


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Isotypic decomposition of ``rep`` over a dual.

    ``isometries[label][u]`` has shape ``(dims[u], d_u^rho * m_rho)``; column
    ``i * m + k`` is basis vector ``i`` of the ``k``-th copy of rho, so that
    ``C_u^* pi(x) C_v`` is block diagonal with blocks ``kron(rho(x), I_m)``.
    """

    rep: GroupoidRep
    multiplicities: dict[Label, int]
    isometries: dict[Label, tuple[np.ndarray, ...]]
    unitaries: tuple[np.ndarray, ...]

    def labels(self) -> list[Label]:
        return [l for l, m in self.multiplicities.items() if m]

    def reassembly_residual(self, dual: "Dual") -> float:
        g = self.rep.groupoid
        worst = 0.0
        for x in g.arrows:
            s, r = int(g.src[x]), int(g.rng[x])
            blocks = [np.kron(dual[l].rep(x), np.eye(m)) for l, m in self.multiplicities.items() if m]
            bd = block_diag(blocks, shape_hint=(self.rep.dims[r], self.rep.dims[s]))
            got = self.unitaries[r].conj().T @ self.rep(x) @ self.unitaries[s]
            if got.size:
                worst = max(worst, float(np.abs(got - bd).max()))
        for c in self.unitaries:
            if c.size:
                worst = max(worst, float(np.abs(c.conj().T @ c - np.eye(c.shape[1])).max()))
        return worst


def block_diag(blocks: Sequence[np.ndarray], shape_hint: tuple[int, int] | None = None) -> np.ndarray:
    """Block diagonal matrix that tolerates zero-sized blocks."""
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    if shape_hint is not None and not blocks:
        rows, cols = shape_hint
    out = np.zeros((rows, cols), dtype=complex)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


# ----------------------------------------------------------------------------
# constructors

def trivial_rep(g: FiniteGroupoid) -> GroupoidRep:
    one = np.ones((1, 1), dtype=complex)
    return GroupoidRep(g, (1,) * g.n_units, tuple(one for _ in g.arrows))


def regular_module(g: FiniteGroupoid) -> GroupoidRep:
    """Left regular module: H_u spanned by arrows with range u, x e_y = e_{xy}."""
    basis = {u: [int(y) for y in np.flatnonzero(g.rng == u)] for u in g.units}
    pos = {u: {y: i for i, y in enumerate(ys)} for u, ys in basis.items()}
    mats = []
    for x in g.arrows:
        s, r = int(g.src[x]), int(g.rng[x])
        m = np.zeros((len(basis[r]), len(basis[s])), dtype=complex)
        for j, y in enumerate(basis[s]):
            m[pos[r][int(g.comp[x, y])], j] = 1.0
        mats.append(m)
    return GroupoidRep(g, tuple(len(basis[u]) for u in g.units), tuple(mats))


def induce(g: FiniteGroupoid, component: Sequence[int], base: int, trans: dict[int, int],
           sigma: GroupRep, label: Label = (0, 0)) -> Irrep:
    """Irrep with mat(x) = sigma(t_{rng x}^{-1} x t_{src x}) on the component."""
    iso = isotropy(g, base)
    if sigma.group.order != iso.order or not np.array_equal(sigma.group.table, iso.table):
        raise ShapeError("sigma is not a representation of the base isotropy group")
    local = {x: i for i, x in enumerate(iso.elements)}
    members = set(int(u) for u in component)
    d = sigma.dim
    dims = tuple(d if u in members else 0 for u in g.units)
    empty = np.zeros((0, 0), dtype=complex)
    mats = []
    for x in g.arrows:
        s, r = int(g.src[x]), int(g.rng[x])
        if s not in members:
            mats.append(empty)
            continue
        h = g.comp[g.inv[trans[r]], g.comp[x, trans[s]]]
        mats.append(np.array(sigma(local[int(h)]), dtype=complex))
    return Irrep(label, GroupoidRep(g, dims, tuple(mats)), sigma)


def tensor(p1: GroupoidRep, p2: GroupoidRep) -> GroupoidRep:
    if p1.groupoid is not p2.groupoid:
        raise ShapeError("tensor of representations of different groupoids")
    dims = tuple(a * b for a, b in zip(p1.dims, p2.dims))
    return GroupoidRep(p1.groupoid, dims, tuple(np.kron(a, b) for a, b in zip(p1.mats, p2.mats)))


def direct_sum(p1: GroupoidRep, p2: GroupoidRep) -> GroupoidRep:
    if p1.groupoid is not p2.groupoid:
        raise ShapeError("direct sum of representations of different groupoids")
    dims = tuple(a + b for a, b in zip(p1.dims, p2.dims))
    return GroupoidRep(p1.groupoid, dims, tuple(block_diag([a, b]) for a, b in zip(p1.mats, p2.mats)))


def conjugate(p: GroupoidRep) -> GroupoidRep:
    return GroupoidRep(p.groupoid, p.dims, tuple(m.conj() for m in p.mats))


def dual_rep(p: GroupoidRep) -> GroupoidRep:
    """Contragredient on the coordinate dual: x -> transpose(pi(inv x))."""
    g = p.groupoid
    return GroupoidRep(g, p.dims, tuple(p.mats[g.inv[x]].T.copy() for x in g.arrows))


def conjugate_by(p: GroupoidRep, unitaries: Sequence[np.ndarray]) -> GroupoidRep:
    """Equivalent representation x -> U_{rng x} pi(x) U_{src x}^*."""
    g = p.groupoid
    mats = tuple(unitaries[g.rng[x]] @ p.mats[x] @ unitaries[g.src[x]].conj().T for x in g.arrows)
    return GroupoidRep(g, p.dims, mats)


# ----------------------------------------------------------------------------
# intertwiners

def _intertwiner_system(p1: GroupoidRep, p2: GroupoidRep):
    g = p1.groupoid
    offsets = np.concatenate([[0], np.cumsum([p2.dims[u] * p1.dims[u] for u in g.units])])
    rows = []
    for x in g.arrows:
        s, r = int(g.src[x]), int(g.rng[x])
        a, b = p1(x), p2(x)
        if a.size == 0 or b.size == 0:
            continue
        # row-major vec: vec(h_r a) = (I kron a^T) vec(h_r), vec(b h_s) = (b kron I) vec(h_s)
        block = np.zeros((p2.dims[r] * p1.dims[s], offsets[-1]), dtype=complex)
        block[:, offsets[r]:offsets[r + 1]] += np.kron(np.eye(p2.dims[r]), a.T)
        block[:, offsets[s]:offsets[s + 1]] -= np.kron(b, np.eye(p1.dims[s]))
        rows.append(block)
    return rows, offsets


def null_space(m: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal null-space basis; singular values below ``tol * max(1, s_max)`` count as zero."""
    _, s, vh = scipy.linalg.svd(m)
    cutoff = tol * max(1.0, float(s[0]) if s.size else 0.0)
    rank = int((s > cutoff).sum())
    return vh[rank:].conj().T


def intertwiners(p1: GroupoidRep, p2: GroupoidRep, rcond: float = 1e-9) -> list[Intertwiner]:
    """Orthonormal basis (HS inner product summed over units) of Mor(p1, p2)."""
    if p1.groupoid is not p2.groupoid:
        raise ShapeError("intertwiners between representations of different groupoids")
    g = p1.groupoid
    rows, offsets = _intertwiner_system(p1, p2)
    n = int(offsets[-1])
    if n == 0:
        return []
    m = np.vstack(rows) if rows else np.zeros((0, n), dtype=complex)
    if m.shape[0] == 0:
        basis = np.eye(n, dtype=complex)
    else:
        basis = null_space(m, rcond)
    out = []
    for col in basis.T:
        blocks = tuple(col[offsets[u]:offsets[u + 1]].reshape(p2.dims[u], p1.dims[u]) for u in g.units)
        out.append(Intertwiner(blocks))
    return out


# ----------------------------------------------------------------------------
# the unitary dual

class Dual:
    """Complete list of irreps of a groupoid, one per (component, isotropy irrep)."""

    def __init__(self, groupoid: FiniteGroupoid, irreps: list[Irrep], seed=0):
        self.groupoid = groupoid
        self.irreps = irreps
        self.seed = seed
        self._index = {ir.label: i for i, ir in enumerate(irreps)}
        self._tensor_cache: dict[tuple[Label, Label], Decomposition] = {}
        self._conj_cache: dict[Label, tuple[Label, Decomposition]] = {}
        self.components = components(groupoid)

    def __getitem__(self, label: Label) -> Irrep:
        return self.irreps[self._index[tuple(label)]]

    def __iter__(self):
        return iter(self.irreps)

    def __len__(self):
        return len(self.irreps)

    @property
    def labels(self) -> list[Label]:
        return [ir.label for ir in self.irreps]

    @cached_property
    def haar(self) -> HaarSystem:
        return haar(self.groupoid)

    def dim(self, label: Label, u: int) -> int:
        return self[label].rep.dims[u]

    def component_units(self, c: int) -> list[int]:
        return self.components[c]

    def labels_of_component(self, c: int) -> list[Label]:
        return [l for l in self.labels if l[0] == c]

    def labels_at(self, u: int) -> list[Label]:
        return self.labels_of_component(int(self.groupoid.component_of[u]))

    def trivial_label(self, c: int) -> Label:
        # group_irreps sorts the trivial irrep first
        return (c, 0)

    def tensor_decomposition(self, l1: Label, l2: Label) -> Decomposition:
        key = (tuple(l1), tuple(l2))
        if key not in self._tensor_cache:
            rep = tensor(self[l1].rep, self[l2].rep)
            self._tensor_cache[key] = decompose(rep, self)
        return self._tensor_cache[key]

    def conjugate_pair(self, label: Label) -> tuple[Label, Decomposition]:
        """Label of the irrep equivalent to conj(rho), with the decomposition of conj(rho)."""
        label = tuple(label)
        if label not in self._conj_cache:
            dec = decompose(conjugate(self[label].rep), self)
            (other,) = dec.labels()
            self._conj_cache[label] = (other, dec)
        return self._conj_cache[label]

    def dual_decomposition(self, label: Label) -> Decomposition:
        label = tuple(label)
        key = ("dual", label)
        if key not in self._tensor_cache:
            self._tensor_cache[key] = decompose(dual_rep(self[label].rep), self)
        return self._tensor_cache[key]

    def sum_rule(self) -> dict[int, tuple[int, int]]:
        """Per component: (sum_rho sum_{u,v} d_u d_v, arrow count)."""
        g = self.groupoid
        out = {}
        for c, units in enumerate(self.components):
            total = sum(self.dim(l, u) * self.dim(l, v)
                        for l in self.labels_of_component(c) for u in units for v in units)
            arrows = int(np.isin(g.src, units).sum())
            out[c] = (total, arrows)
        return out


def unitary_dual(g: FiniteGroupoid, seed=0, tol: float = 1e-6) -> Dual:
    irreps = []
    for c, comp in enumerate(components(g)):
        base = comp[0]
        trans = transversal(g, comp, base)
        for k, sigma in enumerate(group_irreps(isotropy(g, base), seed=seed, tol=tol)):
            irreps.append(induce(g, comp, base, trans, sigma, label=(c, k)))
    return Dual(g, irreps, seed=seed)


def decompose(p: GroupoidRep, dual: Dual, seed=None) -> Decomposition:
    """Isotypic decomposition with explicit isometries.

    With ``seed`` set, each multiplicity space gets an independent random
    orthonormal basis; the decomposition is otherwise the SVD null-space basis.
    """
    g = p.groupoid
    rng = np.random.default_rng(seed) if seed is not None else None
    mults: dict[Label, int] = {}
    isos: dict[Label, tuple[np.ndarray, ...]] = {}
    for ir in dual:
        rho = ir.rep
        basis = intertwiners(rho, p)
        m = len(basis)
        mults[ir.label] = m
        if m == 0:
            continue
        total = sum(rho.dims)
        if rng is not None:
            mix = haar_unitary(m, rng)
            basis = [Intertwiner(tuple(sum(mix[k, j] * basis[k].blocks[u] for k in range(m))
                                       for u in g.units)) for j in range(m)]
        cols = []
        for u in g.units:
            d = rho.dims[u]
            c = np.zeros((p.dims[u], d * m), dtype=complex)
            for k, h in enumerate(basis):
                c[:, k::m] = np.sqrt(total) * h.blocks[u]
            cols.append(c)
        isos[ir.label] = tuple(cols)
    unitaries = []
    for u in g.units:
        parts = [isos[l][u] for l in isos]
        c = np.hstack(parts) if parts else np.zeros((p.dims[u], 0), dtype=complex)
        if c.shape[1] != p.dims[u]:
            raise DecompositionError(
                f"dual is incomplete: at unit {u} the irreps cover {c.shape[1]} of {p.dims[u]} dimensions"
            )
        unitaries.append(c)
    return Decomposition(p, mults, isos, tuple(unitaries))


def orthogonality_report(g: FiniteGroupoid, dual: Dual) -> dict:
    """Schur orthogonality of matrix coefficients on every nonempty fiber."""
    w = dual.haar.weight
    worst_orth = 0.0
    worst_mass = 0.0
    checked = 0
    for u, v in g.nonempty_fibers():
        fib = g.fiber(u, v)
        labels = dual.labels_at(u)
        coeffs = {l: np.stack([dual[l].rep(x) for x in fib]) for l in labels}  # (n, dv, du)
        for l1 in labels:
            a = coeffs[l1]
            d = dual.dim(l1, u)
            for l2 in labels:
                b = coeffs[l2]
                gram = np.einsum("x,xij,xkl->ijkl", w[fib], a, b.conj())
                expected = np.zeros_like(gram)
                if l1 == l2:
                    eye = np.eye(a.shape[1])
                    eye2 = np.eye(a.shape[2])
                    expected = np.einsum("ik,jl->ijkl", eye, eye2) / d
                worst_orth = max(worst_orth, float(np.abs(gram - expected).max()))
                checked += 1
            mass = np.einsum("x,xij->ij", w[fib], a)
            target = np.ones((1, 1)) if l1 == dual.trivial_label(l1[0]) else np.zeros_like(mass)
            worst_mass = max(worst_mass, float(np.abs(mass - target).max()))
    return {
        "max_residual": max(worst_orth, worst_mass),
        "orthogonality_residual": worst_orth,
        "mass_residual": worst_mass,
        "pairs_checked": checked,
    }
