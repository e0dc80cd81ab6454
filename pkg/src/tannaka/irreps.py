"""Unitary irreducible representations of finite groups.

Irreps are found by splitting the regular representation: averaging a random
Hermitian matrix over the group gives an element of the commutant whose
eigenspaces are invariant subspaces.  Repeating on each eigenspace until the
commutant is one-dimensional yields the irreducible pieces.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, SplitError
from .groupoid import FiniteGroup

UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GroupRep:
    group: FiniteGroup
    mats: np.ndarray  # (order, dim, dim)

    @property
    def dim(self) -> int:
        return self.mats.shape[1]

    def __call__(self, g: int) -> np.ndarray:
        return self.mats[g]

    @property
    def character(self) -> np.ndarray:
        return np.trace(self.mats, axis1=1, axis2=2)

    def unitarity_residual(self) -> float:
        if self.dim == 0:
            return 0.0
        prod = self.mats @ self.mats.conj().transpose(0, 2, 1)
        return float(np.abs(prod - np.eye(self.dim)).max())

    def homomorphism_residual(self) -> float:
        t = self.group.table
        lhs = self.mats[t]  # (g, h, d, d) = mat(gh)
        rhs = self.mats[:, None] @ self.mats[None, :]
        return float(np.abs(lhs - rhs).max()) if self.dim else 0.0


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n x n unitary (QR of a complex Ginibre matrix)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def regular_rep(group: FiniteGroup) -> GroupRep:
    """Left translation: mat(g) e_k = e_{gk}."""
    n = group.order
    mats = np.zeros((n, n, n), dtype=complex)
    k = np.arange(n)
    for g in range(n):
        mats[g, group.table[g, k], k] = 1.0
    return GroupRep(group, mats)


def equivariant_average(rep: GroupRep, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.shape != (rep.dim, rep.dim):
        raise ShapeError(f"expected a {rep.dim}x{rep.dim} matrix, got {m.shape}")
    avg = rep.mats @ m @ rep.mats.conj().transpose(0, 2, 1)
    return avg.mean(axis=0)


def commutant_dim(rep: GroupRep) -> int:
    """dim End_G(rep) = <chi, chi> for a unitary representation."""
    chi = rep.character
    return int(round(float(np.vdot(chi, chi).real) / rep.group.order))


def restrict(rep: GroupRep, basis: np.ndarray) -> GroupRep:
    """Representation on the invariant subspace spanned by orthonormal ``basis`` columns."""
    return GroupRep(rep.group, basis.conj().T[None] @ rep.mats @ basis[None])


def _cluster(values: np.ndarray, tol: float) -> list[np.ndarray]:
    # values are sorted ascending (eigh); split wherever the gap exceeds tol
    cuts = np.flatnonzero(np.diff(values) > tol) + 1
    return np.split(np.arange(len(values)), cuts)


def split(rep: GroupRep, seed=0, tol: float = 1e-6, max_retries: int = 20) -> list[GroupRep]:
    """Decompose ``rep`` into irreducible subrepresentations on orthogonal subspaces."""
    if rep.unitarity_residual() > UNITARY_TOL:
        raise SplitError("split requires a unitary representation")
    rng = np.random.default_rng(seed)
    out: list[GroupRep] = []
    stack = [rep]
    while stack:
        r = stack.pop()
        if r.dim == 0:
            continue
        if commutant_dim(r) == 1:
            out.append(r)
            continue
        for _ in range(max_retries):
            x = rng.standard_normal((r.dim, r.dim)) + 1j * rng.standard_normal((r.dim, r.dim))
            h = equivariant_average(r, x + x.conj().T)
            h = (h + h.conj().T) / 2
            vals, vecs = np.linalg.eigh(h)
            groups = _cluster(vals, tol)
            if len(groups) > 1:
                break
        else:
            raise SplitError(
                f"no eigenvalue gap above {tol} after {max_retries} draws "
                f"(dim={r.dim}, commutant dim={commutant_dim(r)})"
            )
        # pushed in reverse so pieces come out in eigenvalue order
        for idx in reversed(groups):
            stack.append(restrict(r, vecs[:, idx]))
    return out


def _char_key(rep: GroupRep):
    chi = rep.character
    return (rep.dim, tuple((-round(float(c.real), 8), -round(float(c.imag), 8)) for c in chi))


def equivalent(r1: GroupRep, r2: GroupRep, tol: float = 1e-8) -> bool:
    """Unitary reps are equivalent iff their characters agree."""
    if r1.dim != r2.dim:
        return False
    return bool(np.abs(r1.character - r2.character).max(initial=0.0) < tol)


def group_irreps(group: FiniteGroup, seed=0, tol: float = 1e-6) -> list[GroupRep]:
    """Complete list of pairwise inequivalent unitary irreps, trivial first.

    Sorted by dimension, then by character with larger real parts first.
    """
    pieces = split(regular_rep(group), seed=seed, tol=tol)
    reps: list[GroupRep] = []
    for p in pieces:
        if not any(equivalent(p, q) for q in reps):
            reps.append(p)
    reps.sort(key=_char_key)
    total = sum(r.dim ** 2 for r in reps)
    if total != group.order:
        raise SplitError(f"irreps incomplete: sum of squared dims {total} != |G| = {group.order}")
    return reps
