"""The Tannaka groupoid of a finite groupoid and the duality check.

An element of T(G) of type (u, v) is a family of blocks ``a^rho_{u,v}``, one per
irrep, such that the natural transformation carrying them is monoidal and
Hermitian.  ``reconstruct`` solves these polynomial constraints directly and
``verify_duality`` compares the solutions with the image of x -> T_x.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, ScaleError
from .fourier import fourier, random_trig_poly
from .groupoid import FiniteGroupoid
from .irreps import haar_unitary
from .natural import (NaturalTransformation, center_report, extend, g_preservation, is_hermitian,
                      monoidal_residual, unitarity_residual)
from .reps import Decomposition, Dual, GroupoidRep, Label, decompose, dual_rep, orthogonality_report, regular_module, unitary_dual

MAX_ARROWS = 2000
MAX_NEWTON_ISOTROPY = 24
METHODS = ("abelian-exact", "newton-cluster")


@dataclass(eq=False)
class TannakaElement:
    u: int
    v: int
    blocks: dict[Label, np.ndarray]

    def as_nt(self, dual: Dual) -> NaturalTransformation:
        return NaturalTransformation(dual, {(l, self.u, self.v): m for l, m in self.blocks.items()})

    def distance(self, other: "TannakaElement") -> float:
        """Largest Frobenius norm of a block difference; elements of different type are far apart."""
        if (self.u, self.v) != (other.u, other.v):
            return max(float(np.linalg.norm(m)) for m in itertools.chain(self.blocks.values(), other.blocks.values()))
        return max((float(np.linalg.norm(self.blocks[l] - other.blocks[l])) for l in self.blocks), default=0.0)


def tannaka_of_x(dual: Dual, x: int) -> TannakaElement:
    g = dual.groupoid
    u, v = int(g.src[x]), int(g.rng[x])
    return TannakaElement(u, v, {l: dual[l].rep(x) for l in dual.labels_at(u)})


def compose(a: TannakaElement, b: TannakaElement) -> TannakaElement:
    """(ab)_{u,v} = a_{w,v} b_{u,w}; needs b.v == a.u."""
    if b.v != a.u:
        raise ValueError(f"cannot compose: b ends at {b.v} but a starts at {a.u}")
    return TannakaElement(b.u, a.v, {l: a.blocks[l] @ b.blocks[l] for l in a.blocks})


def identity_element(dual: Dual, u: int) -> TannakaElement:
    return tannaka_of_x(dual, dual.groupoid.unit_at(u))


def _dual_block(a: TannakaElement, dual: Dual, label: Label) -> np.ndarray:
    dec = dual.dual_decomposition(label)
    return extend(a.as_nt(dual), dec.rep, dec, (a.u, a.v))


def inverse(a: TannakaElement, dual: Dual) -> TannakaElement:
    """(a^{-1})^rho = transpose of a evaluated on the contragredient of rho."""
    blocks = {}
    for label in a.blocks:
        if tuple(label) not in dual.labels:
            raise KeyError(f"label {label} missing from the dual")
        blocks[label] = _dual_block(a, dual, label).T
    return TannakaElement(a.v, a.u, blocks)


def pairing_residual(a: TannakaElement, dual: Dual) -> float:
    """max |transpose(a^{rho-check}) a^rho - I| over irreps."""
    worst = 0.0
    for label, m in a.blocks.items():
        if m.size:
            prod = _dual_block(a, dual, label).T @ m
            worst = max(worst, float(np.abs(prod - np.eye(m.shape[1])).max()))
    return worst


def epsilon_check(dual: Dual, label: Label, u: int | None = None) -> float:
    """Residual of eps_{r(x)} (rho-check (x) rho)(x) = eps_{s(x)} with eps(eta (x) xi) = <eta, xi>."""
    g = dual.groupoid
    rho = dual[label].rep
    check = dual_rep(rho)
    worst = 0.0
    for x in g.arrows:
        s, r = int(g.src[x]), int(g.rng[x])
        if rho.dims[s] == 0 or (u is not None and s != u):
            continue
        eps_s = np.eye(rho.dims[s]).reshape(1, -1)
        eps_r = np.eye(rho.dims[r]).reshape(1, -1)
        lhs = eps_r @ np.kron(check(x), rho(x))
        worst = max(worst, float(np.abs(lhs - eps_s).max()))
    return worst


# ----------------------------------------------------------------------------
# restriction / extension

def p_pi(a: TannakaElement, dual: Dual, pi: GroupoidRep, dec: Decomposition) -> np.ndarray:
    """P_pi(a) = a^pi_{u,v}."""
    return extend(a.as_nt(dual), pi, dec, (a.u, a.v))


def rep_of_tannaka(pi: GroupoidRep, dual: Dual, dec: Decomposition | None = None) -> Callable[[TannakaElement], np.ndarray]:
    """The representation P_pi of T(G) on the spaces of pi."""
    dec = dec or decompose(pi, dual)

    def apply(a: TannakaElement) -> np.ndarray:
        return extend(a.as_nt(dual), pi, dec, (a.u, a.v))

    return apply


def t_star(big_pi: Callable[[TannakaElement], np.ndarray], dual: Dual) -> GroupoidRep:
    """Restriction along x -> T_x: x -> Pi(T_x)."""
    g = dual.groupoid
    mats = tuple(np.asarray(big_pi(tannaka_of_x(dual, x))) for x in g.arrows)
    dims = [0] * g.n_units
    for x, m in enumerate(mats):
        dims[g.rng[x]], dims[g.src[x]] = m.shape
    return GroupoidRep(g, tuple(dims), mats)


def extend_function(dual: Dual, f: np.ndarray, uv: tuple[int, int]) -> Callable[[TannakaElement], complex]:
    """E(f)(a) = sum_rho d_u^rho Tr(F(f)(rho) a^rho) for a of type (u, v)."""
    g = dual.groupoid
    coef = fourier(g, dual.haar, dual, f, fibers=[uv])
    u, v = uv
    terms = [(l, dual.dim(l, u), coef[(l, u, v)]) for l in dual.labels_at(u)]

    def evaluate(a: TannakaElement) -> complex:
        if (a.u, a.v) != (u, v):
            raise ValueError(f"element of type {(a.u, a.v)} outside fiber {uv}")
        return complex(sum(d * np.trace(c @ a.blocks[l]) for l, d, c in terms))

    return evaluate


def integration_check(g: FiniteGroupoid, dual: Dual, f: np.ndarray, uv: tuple[int, int],
                      solved: Sequence[TannakaElement] | None = None) -> tuple[float, float | None]:
    """Both integrals of E(f) against the trivial-coefficient prediction.

    Route one sums over the image {T_x} with the Haar weights of G; route two
    takes the uniform average over ``solved``.
    """
    u, v = uv
    coef = fourier(g, dual.haar, dual, f, fibers=[uv])
    predicted = complex(coef[(dual.trivial_label(int(g.component_of[u])), u, v)][0, 0])
    ef = extend_function(dual, f, uv)
    w = dual.haar.weight
    image = sum(w[x] * ef(tannaka_of_x(dual, x)) for x in g.fiber(u, v))
    r1 = abs(image - predicted)
    r2 = None
    if solved is not None:
        r2 = abs(np.mean([ef(s) for s in solved]) - predicted)
    return float(r1), (None if r2 is None else float(r2))


# ----------------------------------------------------------------------------
# reconstruction

class _Constraints:
    """Monoidal + Hermitian constraints for a^rho_{u,v}, rho in one component.

    The residual has the form ``A z + B conj(z) + c + q(z)`` where ``z`` stacks
    the blocks and ``q`` collects the entries of the Kronecker products.
    """

    def __init__(self, dual: Dual, uv: tuple[int, int]):
        g = dual.groupoid
        u, v = uv
        self.dual, self.u, self.v = dual, u, v
        c = int(g.component_of[u])
        self.labels = dual.labels_of_component(c)
        self.trivial = dual.trivial_label(c)
        self.dims = [dual.dim(l, u) for l in self.labels]
        self.offsets = np.concatenate([[0], np.cumsum([d * d for d in self.dims])]).astype(int)
        self.n = int(self.offsets[-1])
        self.pairs = [(i, j) for i in range(len(self.labels)) for j in range(len(self.labels))]
        # decompositions are computed once, up front
        for l1, l2 in itertools.product(self.labels, repeat=2):
            dual.tensor_decomposition(l1, l2)
        for l in self.labels:
            dual.conjugate_pair(l)
        self.free = np.ones(self.n, dtype=bool)
        self.free[self.offsets[self.labels.index(self.trivial)]] = False
        self._build_quadratic()
        self._build_affine()

    def blocks(self, z: np.ndarray) -> dict[Label, np.ndarray]:
        return {l: z[self.offsets[i]:self.offsets[i + 1]].reshape(d, d)
                for i, (l, d) in enumerate(zip(self.labels, self.dims))}

    def element(self, z: np.ndarray) -> TannakaElement:
        return TannakaElement(self.u, self.v, {l: m.copy() for l, m in self.blocks(z).items()})

    def _affine(self, z: np.ndarray) -> np.ndarray:
        dual, u, v = self.dual, self.u, self.v
        a = TannakaElement(u, v, self.blocks(z)).as_nt(dual)
        parts = [np.array([a.block(self.trivial, u, v)[0, 0] - 1.0])]
        for i, j in self.pairs:
            dec = dual.tensor_decomposition(self.labels[i], self.labels[j])
            parts.append(-extend(a, dec.rep, dec, (u, v)).ravel())
        for l in self.labels:
            _, dec = dual.conjugate_pair(l)
            parts.append((a.block(l, u, v) - extend(a, dec.rep, dec, (u, v)).conj()).ravel())
        return np.concatenate(parts)

    def _build_quadratic(self):
        p_idx, q_idx = [np.full(1, -1)], [np.full(1, -1)]
        for i, j in self.pairs:
            di, dj = self.dims[i], self.dims[j]
            r1, r2, c1, c2 = np.meshgrid(np.arange(di), np.arange(dj), np.arange(di), np.arange(dj), indexing="ij")
            # kron(A, B)[r1*dj + r2, c1*dj + c2] = A[r1, c1] B[r2, c2]; flatten in row-major order
            order = np.argsort(((r1 * dj + r2) * (di * dj) + (c1 * dj + c2)).ravel())
            p = (self.offsets[i] + r1 * di + c1).ravel()[order]
            q = (self.offsets[j] + r2 * dj + c2).ravel()[order]
            p_idx.append(p)
            q_idx.append(q)
        for d in self.dims:
            p_idx.append(np.full(d * d, -1))
            q_idx.append(np.full(d * d, -1))
        self.p = np.concatenate(p_idx)
        self.q = np.concatenate(q_idx)
        self.has_quad = self.p >= 0
        self.rows = np.flatnonzero(self.has_quad)

    def _build_affine(self):
        n = self.n
        zero = np.zeros(n, dtype=complex)
        self.c = self._affine(zero)
        A = np.zeros((len(self.c), n), dtype=complex)
        B = np.zeros_like(A)
        for k in range(n):
            e = zero.copy()
            e[k] = 1.0
            fr = self._affine(e) - self.c
            e[k] = 1j
            fi = (self._affine(e) - self.c) / 1j
            A[:, k] = (fr + fi) / 2
            B[:, k] = (fr - fi) / 2
        self.A, self.B = A, B

    def residual(self, z: np.ndarray) -> np.ndarray:
        r = self.A @ z + self.B @ z.conj() + self.c
        r[self.rows] += z[self.p[self.rows]] * z[self.q[self.rows]]
        return r

    def jacobian(self, z: np.ndarray) -> np.ndarray:
        dz = self.A.copy()
        rows = self.rows
        np.add.at(dz, (rows, self.p[rows]), z[self.q[rows]])
        np.add.at(dz, (rows, self.q[rows]), z[self.p[rows]])
        jx = dz + self.B
        jy = 1j * (dz - self.B)
        m, n = jx.shape
        out = np.empty((2 * m, 2 * n))
        out[:m, :n], out[:m, n:] = jx.real, jy.real
        out[m:, :n], out[m:, n:] = jx.imag, jy.imag
        return out


def _gauss_newton(con: _Constraints, z: np.ndarray, max_iter: int = 100) -> tuple[np.ndarray, float]:
    """Levenberg-Marquardt damped Gauss-Newton on the stacked real residual."""
    n = con.n
    free = np.concatenate([con.free, con.free])
    z = z.copy()
    z[~con.free] = 1.0  # the trivial block is pinned by the unit constraint
    r = con.residual(z)
    cost = float(np.vdot(r, r).real)
    lam = 1e-3
    for _ in range(max_iter):
        if np.abs(r).max() < 1e-14 or lam > 1e8:
            break
        jac = con.jacobian(z)[:, free]
        rr = np.concatenate([r.real, r.imag])
        jtj = jac.T @ jac
        g = jac.T @ rr
        diag = np.diag(jtj).copy()
        full = np.zeros(2 * n)
        full[free] = np.linalg.solve(jtj + lam * np.diag(np.maximum(diag, 1e-12)), g)
        z_new = z - (full[:n] + 1j * full[n:])
        r_new = con.residual(z_new)
        cost_new = float(np.vdot(r_new, r_new).real)
        if np.isfinite(cost_new) and cost_new < cost:
            z, r, cost = z_new, r_new, cost_new
            lam = max(lam / 10, 1e-12)
        else:
            lam *= 10
    res = float(np.abs(r).max())
    return z, (res if np.isfinite(res) else np.inf)


@dataclass
class Reconstruction:
    u: int
    v: int
    method: str
    solutions: list[TannakaElement]
    residuals: list[float] = field(default_factory=list)
    attempts: int = 0
    converged: int = 0
    partial: bool = False

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __getitem__(self, i):
        return self.solutions[i]


def _cluster(points: list[tuple[float, TannakaElement]], radius: float) -> list[tuple[float, TannakaElement]]:
    reps: list[tuple[float, TannakaElement]] = []
    for res, el in sorted(points, key=lambda p: p[0]):
        if not any(el.distance(other) < radius for _, other in reps):
            reps.append((res, el))
    return reps


def _abelian_exact(con: _Constraints, tol: float) -> list[tuple[float, TannakaElement]]:
    dual, u, v = con.dual, con.u, con.v
    labels = con.labels
    # product table of the character group and the phases of the tensor decompositions
    prod, phase = {}, {}
    for l1, l2 in itertools.product(labels, repeat=2):
        dec = dual.tensor_decomposition(l1, l2)
        (k,) = dec.labels()
        prod[(l1, l2)] = k
        phase[(l1, l2)] = complex(dec.isometries[k][v][0, 0] * np.conj(dec.isometries[k][u][0, 0]))

    def generated(gens):
        seen = {con.trivial}
        frontier = [con.trivial]
        while frontier:
            nxt = []
            for a in frontier:
                for s in gens:
                    b = prod[(a, s)]
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return seen

    gens: list[Label] = []
    span = {con.trivial}
    for l in labels:
        if l not in span:
            gens.append(l)
            span = generated(gens)

    candidates = []
    for l in gens:
        # a^{l^{k+1}} = a^{l^k} a^l / phase(l^k, l); closing the cycle fixes (a^l)^n
        power, const, n = l, 1.0 + 0j, 1
        while power != con.trivial:
            const *= phase[(power, l)]
            power = prod[(power, l)]
            n += 1
        root = const ** (1.0 / n)
        candidates.append([root * np.exp(2j * np.pi * m / n) for m in range(n)])

    out = []
    for choice in itertools.product(*candidates):
        val = {con.trivial: 1.0 + 0j}
        frontier = [con.trivial]
        while frontier:
            nxt = []
            for a in frontier:
                for s, t in zip(gens, choice):
                    b = prod[(a, s)]
                    if b not in val:
                        val[b] = val[a] * t / phase[(a, s)]
                        nxt.append(b)
            frontier = nxt
        z = np.array([val[l] for l in labels], dtype=complex)
        res = float(np.abs(con.residual(z)).max())
        if res < tol:
            out.append((res, con.element(z)))
    return _cluster(out, 10 * tol)


def reconstruct(g: FiniteGroupoid, dual: Dual, uv: tuple[int, int], method: str = "abelian-exact", seed=0,
                tol: float = 1e-8, starts: int = 200) -> Reconstruction:
    """Solve for all monoidal Hermitian elements of type (u, v)."""
    if g is not dual.groupoid:
        raise ValueError("dual was computed for a different groupoid")
    u, v = uv
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; expected one of {METHODS}")
    if g.component_of[u] != g.component_of[v]:
        raise ValueError(f"units {u} and {v} lie in different components")
    if method == "newton-cluster" and len(g.fiber(u, u)) > MAX_NEWTON_ISOTROPY:
        raise ScaleError(f"isotropy order {len(g.fiber(u, u))} exceeds {MAX_NEWTON_ISOTROPY}")
    con = _Constraints(dual, uv)
    if method == "abelian-exact":
        if any(d != 1 for d in con.dims):
            raise ConfigError("abelian-exact needs one-dimensional irreps (abelian isotropy)")
        found = _abelian_exact(con, tol)
        return Reconstruction(u, v, method, [e for _, e in found], [r for r, _ in found],
                              attempts=len(found), converged=len(found))

    rng = np.random.default_rng(np.random.SeedSequence([int(seed), u, v]))
    points = []
    attempts = 0
    budget = 5 * starts
    while len(points) < starts and attempts < budget:
        attempts += 1
        z0 = np.concatenate([haar_unitary(d, rng).ravel() for d in con.dims])
        z, res = _gauss_newton(con, z0)
        if res <= tol:
            points.append((res, con.element(z)))
    clusters = _cluster(points, 10 * tol)
    return Reconstruction(u, v, method, [e for _, e in clusters], [r for r, _ in clusters],
                          attempts=attempts, converged=len(points), partial=len(points) < starts)


# ----------------------------------------------------------------------------
# verification

@dataclass
class DualityReport:
    method: str
    seed: int
    injectivity_separation: float
    fibers: list[dict]
    homomorphism_residual: float
    associativity_residual: float
    element_residuals: dict[str, float]
    epsilon_residual: float
    orthogonality_residual: float
    t_star_residual: float
    integration_residual: float
    center: dict
    tol: float
    passed: bool = False

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "seed": self.seed,
            "injectivity_separation": self.injectivity_separation,
            "fibers": self.fibers,
            "homomorphism_residual": self.homomorphism_residual,
            "associativity_residual": self.associativity_residual,
            "element_residuals": self.element_residuals,
            "epsilon_residual": self.epsilon_residual,
            "orthogonality_residual": self.orthogonality_residual,
            "t_star_residual": self.t_star_residual,
            "integration_residual": self.integration_residual,
            "center": self.center,
            "pass": self.passed,
        }


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TANNAKA_THREADS", "1")))
    except ValueError:
        return 1


def injectivity_separation(dual: Dual) -> float:
    """min over distinct arrows of the block distance between T_x and T_y."""
    g = dual.groupoid
    elems = [tannaka_of_x(dual, x) for x in g.arrows]
    best = np.inf
    for u, v in g.nonempty_fibers():
        fib = g.fiber(u, v)
        for i, j in itertools.combinations(fib, 2):
            best = min(best, elems[i].distance(elems[j]))
    if len(g.nonempty_fibers()) > 1:
        # T_x and T_y of different types differ by a full block
        best = min(best, min(max(float(np.linalg.norm(m)) for m in e.blocks.values()) for e in elems))
    return float(best) if np.isfinite(best) else float("inf")


def default_method(dual: Dual) -> str:
    return "abelian-exact" if all(max(ir.rep.dims) == 1 for ir in dual) else "newton-cluster"


def verify_duality(g: FiniteGroupoid, seed=0, method: str | None = None, tol: float = 1e-8,
                   starts: int = 200, n_functions: int = 50, dual: Dual | None = None) -> DualityReport:
    if g.n_arrows > MAX_ARROWS:
        raise ScaleError(f"{g.n_arrows} arrows exceeds the desk-scale limit of {MAX_ARROWS}")
    dual = dual or unitary_dual(g, seed=seed)
    method = method or default_method(dual)
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}")
    if method == "abelian-exact" and default_method(dual) != "abelian-exact":
        raise ConfigError("abelian-exact requested for a groupoid with non-abelian isotropy")

    elems = [tannaka_of_x(dual, x) for x in g.arrows]

    hom = 0.0
    xs, ys = np.nonzero(g.comp >= 0)
    for x, y in zip(xs, ys):
        hom = max(hom, compose(elems[x], elems[y]).distance(elems[g.comp[x, y]]))

    assoc = 0.0
    for x, y in zip(xs, ys):
        for z in np.flatnonzero(g.comp[y] >= 0):
            lhs = compose(compose(elems[x], elems[y]), elems[z])
            rhs = compose(elems[x], compose(elems[y], elems[z]))
            assoc = max(assoc, lhs.distance(rhs))

    el = {"monoidal": 0.0, "hermitian": 0.0, "unitarity": 0.0, "inverse": 0.0,
          "inverse_law": 0.0, "pairing": 0.0, "g_preservation": 0.0}
    for x, e in enumerate(elems):
        nt = e.as_nt(dual)
        el["monoidal"] = max(el["monoidal"], monoidal_residual(nt))
        el["hermitian"] = max(el["hermitian"], is_hermitian(nt).residual)
        el["unitarity"] = max(el["unitarity"], unitarity_residual(nt))
        inv = inverse(e, dual)
        el["inverse"] = max(el["inverse"], inv.distance(elems[g.inv[x]]))
        el["inverse_law"] = max(el["inverse_law"],
                                compose(inv, e).distance(identity_element(dual, e.u)),
                                compose(e, inv).distance(identity_element(dual, e.v)))
        el["pairing"] = max(el["pairing"], pairing_residual(e, dual))
        el["g_preservation"] = max(el["g_preservation"], g_preservation(nt))

    eps = max(epsilon_check(dual, l) for l in dual.labels)
    orth = orthogonality_report(g, dual)["max_residual"]

    reg = regular_module(g)
    reg_dec = decompose(reg, dual)
    pulled = t_star(rep_of_tannaka(reg, dual, reg_dec), dual)
    tstar = max(float(np.abs(pulled(x) - reg(x)).max(initial=0.0)) for x in g.arrows)
    for ir in dual:
        pulled = t_star(rep_of_tannaka(ir.rep, dual), dual)
        tstar = max(tstar, max(float(np.abs(pulled(x) - ir.rep(x)).max(initial=0.0)) for x in g.arrows))

    sep = injectivity_separation(dual)
    match_tol = max(tol, 1e-9)

    def run_fiber(uv):
        u, v = uv
        rec = reconstruct(g, dual, uv, method=method, seed=seed, tol=tol, starts=starts)
        fib = [int(x) for x in g.fiber(u, v)]
        used, dists, unmatched = set(), [], 0
        for sol in rec.solutions:
            d, best = min((sol.distance(elems[x]), x) for x in fib)
            if d < match_tol and best not in used:
                used.add(best)
                dists.append(d)
            else:
                unmatched += 1
        checks = max((max(monoidal_residual(s.as_nt(dual)), is_hermitian(s.as_nt(dual)).residual,
                          pairing_residual(s, dual)) for s in rec.solutions), default=0.0)
        integ = 0.0
        for k in range(n_functions):
            f = random_trig_poly(dual, uv, seed=[int(seed), u, v, k])
            r1, r2 = integration_check(g, dual, f, uv, rec.solutions)
            integ = max(integ, r1, r2 if r2 is not None else 0.0)
        return {
            "u": u,
            "v": v,
            "expected": len(fib),
            "found": len(rec.solutions),
            "matched": len(used),
            "unmatched": unmatched,
            "max_match_dist": max(dists, default=0.0),
            "solution_check_residual": checks,
            "partial": rec.partial,
        }, integ

    fibers = g.nonempty_fibers()
    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_fiber, fibers))
    else:
        results = [run_fiber(uv) for uv in fibers]
    fiber_rows = [r for r, _ in results]
    integration = max((i for _, i in results), default=0.0)

    center = center_report(dual, probes=100, seed=seed)

    report = DualityReport(
        method=method, seed=int(seed), injectivity_separation=sep, fibers=fiber_rows,
        homomorphism_residual=hom, associativity_residual=assoc, element_residuals=el,
        epsilon_residual=eps, orthogonality_residual=orth, t_star_residual=tstar,
        integration_residual=integration, center=center, tol=tol,
    )
    report.passed = bool(
        sep > 1e-6
        and hom < 1e-8 and assoc < 1e-8
        and all(r < 1e-8 for r in el.values())
        and eps < 1e-9 and orth < 1e-9 and tstar < 1e-8
        and integration < 1e-9
        and all(r["found"] == r["expected"] == r["matched"] and r["unmatched"] == 0
                and r["solution_check_residual"] < 1e-8 for r in fiber_rows)
        and center["containment_residual"] < 1e-9 and center["commutation_residual"] < 1e-9
    )
    return report
