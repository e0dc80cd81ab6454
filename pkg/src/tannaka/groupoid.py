"""Finite groupoids: construction from descriptors, validation, Haar systems.

Arrows are dense integer ids ``0..N-1`` and the units occupy the prefix
``0..n_units-1``, so a unit ``u`` is both an object and its identity arrow.
The product ``comp[x, y]`` (written ``xy``) is defined exactly when
``src[x] == rng[y]``; it is ``-1`` elsewhere.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Hashable, Sequence

import numpy as np

from .errors import SpecError

__all__ = [
    "FiniteGroup",
    "FiniteGroupoid",
    "HaarSystem",
    "Violation",
    "builtin_group",
    "build",
    "validate",
    "haar",
    "components",
    "isotropy",
    "transversal",
    "pair",
    "group",
    "bundle",
    "union",
    "product",
]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table; element 0 is the identity."""

    table: np.ndarray
    name: str = ""
    # arrow ids when the group is an isotropy group of a groupoid
    elements: tuple[int, ...] | None = None

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @cached_property
    def inverse(self) -> np.ndarray:
        return np.argmax(self.table == 0, axis=1)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    n_units: int
    src: np.ndarray
    rng: np.ndarray
    comp: np.ndarray
    inv: np.ndarray
    names: tuple[Any, ...] | None = field(default=None, repr=False)

    @property
    def n_arrows(self) -> int:
        return len(self.src)

    @property
    def units(self) -> range:
        return range(self.n_units)

    @property
    def arrows(self) -> range:
        return range(self.n_arrows)

    def unit_at(self, u: int) -> int:
        return u

    def compose(self, x: int, y: int) -> int:
        z = int(self.comp[x, y])
        if z < 0:
            raise ValueError(f"arrows {x} and {y} are not composable")
        return z

    @cached_property
    def _fibers(self) -> dict[tuple[int, int], np.ndarray]:
        buckets: dict[tuple[int, int], list[int]] = {}
        for x in range(self.n_arrows):
            buckets.setdefault((int(self.src[x]), int(self.rng[x])), []).append(x)
        return {k: np.array(v, dtype=np.int64) for k, v in buckets.items()}

    def fiber(self, u: int, v: int) -> np.ndarray:
        """Arrows with source ``u`` and range ``v`` (G_u^v), sorted by id."""
        return self._fibers.get((u, v), np.zeros(0, dtype=np.int64))

    def nonempty_fibers(self) -> list[tuple[int, int]]:
        return sorted(self._fibers)

    @cached_property
    def component_of(self) -> np.ndarray:
        """Component index of every unit (components ordered by smallest unit)."""
        parent = list(range(self.n_units))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for x in range(self.n_arrows):
            a, b = find(int(self.src[x])), find(int(self.rng[x]))
            if a != b:
                parent[max(a, b)] = min(a, b)
        roots = [find(u) for u in range(self.n_units)]
        index = {r: i for i, r in enumerate(sorted(set(roots)))}
        return np.array([index[r] for r in roots], dtype=np.int64)

    def __repr__(self):
        return f"FiniteGroupoid(arrows={self.n_arrows}, units={self.n_units})"


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class HaarSystem:
    """Uniform probability weights on every fiber G_u^v."""

    groupoid: FiniteGroupoid
    weight: np.ndarray

    def fiber_mass(self, u: int, v: int) -> float:
        return float(self.weight[self.groupoid.fiber(u, v)].sum())

    def exact_weight(self, x: int) -> Fraction:
        g = self.groupoid
        return Fraction(1, len(g.fiber(int(g.src[x]), int(g.rng[x]))))


# ----------------------------------------------------------------------------
# groups

def _closure(gens: Sequence[Hashable], mul: Callable, identity: Hashable) -> list:
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = mul(a, s)
                if b not in seen:
                    seen.add(b)
                    elements.append(b)
                    nxt.append(b)
        frontier = nxt
    return elements


def _table_from_elements(elements: list, mul: Callable) -> np.ndarray:
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[mul(a, b)]
    return table


def _perm_mul(p, q):
    # (pq)(i) = p(q(i)), matching operator composition
    return tuple(p[i] for i in q)


def _quat_mul(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def builtin_group(name: str) -> FiniteGroup:
    """Cyclic groups ``C1``..``C12`` and ``S3``, ``D4``, ``Q8``."""
    if name.startswith("C") and name[1:].isdigit():
        n = int(name[1:])
        if not 1 <= n <= 12:
            raise SpecError(f"cyclic group order out of range: {name}")
        k = np.arange(n)
        return FiniteGroup(table=(k[:, None] + k[None, :]) % n, name=name)
    if name == "S3":
        elems = _closure([(1, 0, 2), (1, 2, 0)], _perm_mul, (0, 1, 2))
        return FiniteGroup(table=_table_from_elements(elems, _perm_mul), name=name)
    if name == "D4":
        elems = _closure([(1, 2, 3, 0), (0, 3, 2, 1)], _perm_mul, (0, 1, 2, 3))
        return FiniteGroup(table=_table_from_elements(elems, _perm_mul), name=name)
    if name == "Q8":
        elems = _closure([(0, 1, 0, 0), (0, 0, 1, 0)], _quat_mul, (1, 0, 0, 0))
        return FiniteGroup(table=_table_from_elements(elems, _quat_mul), name=name)
    raise SpecError(f"unknown built-in group {name!r}")


def group_from_table(table: Any, name: str = "") -> FiniteGroup:
    """Validate a Cayley table and relabel so the identity is element 0."""
    try:
        t = np.asarray(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"group table is not an integer matrix: {exc}") from None
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise SpecError(f"group table must be a non-empty square matrix, got shape {t.shape}")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise SpecError("group table entries out of range")
    ids = [e for e in range(n) if np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))]
    if not ids:
        raise SpecError("group table has no identity element")
    e = ids[0]
    for a in range(n):
        if sorted(t[a]) != list(range(n)) or sorted(t[:, a]) != list(range(n)):
            raise SpecError(f"group table is not a Latin square at element {a}")
    assoc = t[t[:, :, None], np.arange(n)[None, None, :]] == t[np.arange(n)[:, None, None], t[None, :, :]]
    if not assoc.all():
        a, b, c = map(int, np.argwhere(~assoc)[0])
        raise SpecError(f"group table not associative at ({a}, {b}, {c})")
    order = [e] + [a for a in range(n) if a != e]
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    relabeled = pos[t[np.ix_(order, order)]]
    return FiniteGroup(table=relabeled, name=name)


# ----------------------------------------------------------------------------
# assembly

def _assemble(units: list, others: list, src: Callable, rng: Callable,
              mul: Callable, inv: Callable) -> FiniteGroupoid:
    labels = list(units) + list(others)
    index = {a: i for i, a in enumerate(labels)}
    n = len(labels)
    s = np.array([index[src(a)] for a in labels], dtype=np.int64)
    r = np.array([index[rng(a)] for a in labels], dtype=np.int64)
    comp = np.full((n, n), -1, dtype=np.int64)
    by_range: dict[int, list[int]] = {}
    for y in range(n):
        by_range.setdefault(int(r[y]), []).append(y)
    for x, a in enumerate(labels):
        for y in by_range.get(int(s[x]), []):
            comp[x, y] = index[mul(a, labels[y])]
    iv = np.array([index[inv(a)] for a in labels], dtype=np.int64)
    return FiniteGroupoid(n_units=len(units), src=s, rng=r, comp=comp, inv=iv, names=tuple(labels))


def _groupoid_of_group(grp: FiniteGroup) -> FiniteGroupoid:
    n = grp.order
    return FiniteGroupoid(
        n_units=1,
        src=np.zeros(n, dtype=np.int64),
        rng=np.zeros(n, dtype=np.int64),
        comp=grp.table.copy(),
        inv=grp.inverse.copy(),
        names=tuple(range(n)),
    )


def _pair(n: int) -> FiniteGroupoid:
    # arrow (v, u) goes from u to v
    units = [(u, u) for u in range(n)]
    others = [(v, u) for v in range(n) for u in range(n) if u != v]
    return _assemble(units, others, src=lambda a: (a[1], a[1]), rng=lambda a: (a[0], a[0]),
                     mul=lambda a, b: (a[0], b[1]), inv=lambda a: (a[1], a[0]))


def _bundle(grp: FiniteGroup, n: int) -> FiniteGroupoid:
    # arrow (h, v, u) goes from u to v carrying group element h
    units = [(0, u, u) for u in range(n)]
    others = [(h, v, u) for v in range(n) for u in range(n) for h in range(grp.order)
              if not (h == 0 and u == v)]
    return _assemble(units, others, src=lambda a: (0, a[2], a[2]), rng=lambda a: (0, a[1], a[1]),
                     mul=lambda a, b: (grp.mul(a[0], b[0]), a[1], b[2]),
                     inv=lambda a: (int(grp.inverse[a[0]]), a[2], a[1]))


def _union(g1: FiniteGroupoid, g2: FiniteGroupoid) -> FiniteGroupoid:
    units = [(0, u) for u in g1.units] + [(1, u) for u in g2.units]
    others = [(0, x) for x in range(g1.n_units, g1.n_arrows)] + [(1, x) for x in range(g2.n_units, g2.n_arrows)]
    gs = (g1, g2)
    return _assemble(units, others,
                     src=lambda a: (a[0], int(gs[a[0]].src[a[1]])),
                     rng=lambda a: (a[0], int(gs[a[0]].rng[a[1]])),
                     mul=lambda a, b: (a[0], int(gs[a[0]].comp[a[1], b[1]])),
                     inv=lambda a: (a[0], int(gs[a[0]].inv[a[1]])))


def _product(g1: FiniteGroupoid, g2: FiniteGroupoid) -> FiniteGroupoid:
    units = [(u1, u2) for u1 in g1.units for u2 in g2.units]
    others = [(x1, x2) for x1 in g1.arrows for x2 in g2.arrows
              if not (x1 < g1.n_units and x2 < g2.n_units)]
    return _assemble(units, others,
                     src=lambda a: (int(g1.src[a[0]]), int(g2.src[a[1]])),
                     rng=lambda a: (int(g1.rng[a[0]]), int(g2.rng[a[1]])),
                     mul=lambda a, b: (int(g1.comp[a[0], b[0]]), int(g2.comp[a[1], b[1]])),
                     inv=lambda a: (int(g1.inv[a[0]]), int(g2.inv[a[1]])))


def _explicit(spec: dict) -> FiniteGroupoid:
    try:
        n_units = int(spec["units"])
        g = FiniteGroupoid(
            n_units=n_units,
            src=np.asarray(spec["src"], dtype=np.int64),
            rng=np.asarray(spec["rng"], dtype=np.int64),
            comp=np.asarray(spec["comp"], dtype=np.int64),
            inv=np.asarray(spec["inv"], dtype=np.int64),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"explicit groupoid needs units/src/rng/comp/inv tables: {exc}") from None
    n = g.n_arrows
    if n_units < 1 or g.rng.shape != (n,) or g.inv.shape != (n,) or g.comp.shape != (n, n):
        raise SpecError("explicit groupoid tables have inconsistent shapes")
    return g


def _resolve_group(desc: Any) -> FiniteGroup:
    if isinstance(desc, str):
        return builtin_group(desc)
    if isinstance(desc, dict):
        if desc.get("kind", "group") != "group":
            raise SpecError("bundle 'group' must describe a group")
        if "name" in desc:
            return builtin_group(desc["name"])
        if "table" in desc:
            return group_from_table(desc["table"])
    if isinstance(desc, list):
        return group_from_table(desc)
    raise SpecError(f"cannot interpret group descriptor {desc!r}")


def _positive_int(spec: dict, key: str) -> int:
    n = spec.get(key)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SpecError(f"{spec.get('kind')!r} needs a positive integer {key!r}, got {n!r}")
    return n


def _expand(spec: Any) -> FiniteGroupoid:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SpecError(f"groupoid descriptor must be an object with a 'kind', got {spec!r}")
    kind = spec["kind"]
    if kind == "group":
        return _groupoid_of_group(_resolve_group(spec))
    if kind == "pair":
        return _pair(_positive_int(spec, "n"))
    if kind == "bundle":
        if "group" not in spec:
            raise SpecError("bundle needs a 'group'")
        return _bundle(_resolve_group(spec["group"]), _positive_int(spec, "n"))
    if kind in ("union", "product"):
        if "left" not in spec or "right" not in spec:
            raise SpecError(f"{kind} needs 'left' and 'right'")
        left, right = _expand(spec["left"]), _expand(spec["right"])
        return _union(left, right) if kind == "union" else _product(left, right)
    if kind == "explicit":
        return _explicit(spec)
    raise SpecError(f"unknown groupoid kind {kind!r}")


def build(spec: dict) -> FiniteGroupoid:
    """Expand a JSON-style descriptor into a validated groupoid.

    >>> build(pair(2)).n_arrows
    4
    """
    g = _expand(spec)
    report = validate(g)
    if report:
        raise SpecError(f"descriptor expands to an invalid groupoid: {report[0]}")
    return g


# descriptor helpers, mostly for tests and interactive use
def pair(n: int) -> dict:
    return {"kind": "pair", "n": n}


def group(name_or_table) -> dict:
    if isinstance(name_or_table, str):
        return {"kind": "group", "name": name_or_table}
    return {"kind": "group", "table": [list(map(int, row)) for row in name_or_table]}


def bundle(grp, n: int) -> dict:
    return {"kind": "bundle", "group": grp, "n": n}


def union(left: dict, right: dict) -> dict:
    return {"kind": "union", "left": left, "right": right}


def product(left: dict, right: dict) -> dict:
    return {"kind": "product", "left": left, "right": right}


# ----------------------------------------------------------------------------
# validation

def validate(g: FiniteGroupoid) -> list[Violation]:
    """Check the groupoid axioms; one entry per violated axiom with a witness."""
    found: dict[str, tuple[int, ...]] = {}

    def flag(axiom, *witness):
        found.setdefault(axiom, tuple(int(w) for w in witness))

    n, k = g.n_arrows, g.n_units
    if not (1 <= k <= n) or g.rng.shape != (n,) or g.inv.shape != (n,) or g.comp.shape != (n, n):
        return [Violation("shape", (n, k))]
    for name, arr in (("src", g.src), ("rng", g.rng)):
        bad = np.flatnonzero((arr < 0) | (arr >= k))
        if bad.size:
            return [Violation(f"{name} out of unit range", (int(bad[0]),))]
    bad = np.flatnonzero((g.inv < 0) | (g.inv >= n))
    if bad.size:
        return [Violation("inv out of range", (int(bad[0]),))]
    if np.any(g.comp >= n) or np.any(g.comp < -1):
        x, y = np.argwhere((g.comp >= n) | (g.comp < -1))[0]
        return [Violation("comp out of range", (x, y))]

    for u in range(k):
        if g.src[u] != u or g.rng[u] != u:
            flag("unit src/rng", u, g.src[u], g.rng[u])

    composable = g.src[:, None] == g.rng[None, :]
    defined = g.comp >= 0
    mismatch = np.argwhere(composable != defined)
    if mismatch.size:
        flag("comp defined iff src(x) = rng(y)", *mismatch[0])
    ok = composable & defined
    xs, ys = np.nonzero(ok)
    zs = g.comp[xs, ys]
    bad = np.flatnonzero(g.src[zs] != g.src[ys])
    if bad.size:
        flag("src(xy) = src(y)", xs[bad[0]], ys[bad[0]], zs[bad[0]])
    bad = np.flatnonzero(g.rng[zs] != g.rng[xs])
    if bad.size:
        flag("rng(xy) = rng(x)", xs[bad[0]], ys[bad[0]], zs[bad[0]])

    ar = np.arange(n)
    left = g.comp[g.rng, ar]
    bad = np.flatnonzero(left != ar)
    if bad.size:
        x = bad[0]
        flag("left unit law", g.rng[x], x, left[x])
    right = g.comp[ar, g.src]
    bad = np.flatnonzero(right != ar)
    if bad.size:
        x = bad[0]
        flag("right unit law", x, g.src[x], right[x])

    if "comp defined iff src(x) = rng(y)" not in found and "src(xy) = src(y)" not in found \
            and "rng(xy) = rng(x)" not in found:
        for x in range(n):
            ys = np.flatnonzero(ok[x])
            if ys.size == 0:
                continue
            xy = g.comp[x, ys]
            # (xy)z vs x(yz) over all z composable with y
            zmask = ok[ys]
            yi, zi = np.nonzero(zmask)
            lhs = g.comp[xy[yi], zi]
            rhs = g.comp[x, g.comp[ys[yi], zi]]
            bad = np.flatnonzero(lhs != rhs)
            if bad.size:
                flag("associativity", x, ys[yi[bad[0]]], zi[bad[0]])
                break

    iv = g.inv
    bad = np.flatnonzero(iv[iv] != ar)
    if bad.size:
        flag("inv(inv(x)) = x", bad[0], iv[bad[0]])
    bad = np.flatnonzero((g.src[iv] != g.rng) | (g.rng[iv] != g.src))
    if bad.size:
        flag("inverse swaps src/rng", bad[0], iv[bad[0]])
    else:
        right_inv = g.comp[ar, iv]
        bad = np.flatnonzero(right_inv != g.rng)
        if bad.size:
            flag("x inv(x) = unit at rng(x)", bad[0], iv[bad[0]], right_inv[bad[0]])
        left_inv = g.comp[iv, ar]
        bad = np.flatnonzero(left_inv != g.src)
        if bad.size:
            flag("inv(x) x = unit at src(x)", iv[bad[0]], bad[0], left_inv[bad[0]])

    if not found:
        comp_of = g.component_of
        sizes: dict[int, tuple[int, int, int]] = {}
        for (u, v), arr in g._fibers.items():
            c = int(comp_of[u])
            if c not in sizes:
                sizes[c] = (u, v, len(arr))
            elif sizes[c][2] != len(arr):
                flag("equal fiber sizes within a component", u, v, sizes[c][0])
        for u in range(k):
            for v in range(k):
                if comp_of[u] == comp_of[v] and len(g.fiber(u, v)) == 0:
                    flag("components are transitive", u, v)

    return [Violation(a, w) for a, w in found.items()]


# ----------------------------------------------------------------------------
# derived structure

def haar(g: FiniteGroupoid) -> HaarSystem:
    w = np.empty(g.n_arrows)
    for (u, v), arr in g._fibers.items():
        w[arr] = 1.0 / len(arr)
    w.setflags(write=False)
    return HaarSystem(groupoid=g, weight=w)


def components(g: FiniteGroupoid) -> list[list[int]]:
    """Partition of the units into transitivity classes, ordered by smallest unit."""
    classes: dict[int, list[int]] = {}
    for u, c in enumerate(g.component_of):
        classes.setdefault(int(c), []).append(u)
    return [classes[c] for c in sorted(classes)]


def isotropy(g: FiniteGroupoid, u: int) -> FiniteGroup:
    """Multiplication table of G_u^u; local element 0 is the unit arrow."""
    if not 0 <= u < g.n_units:
        raise ValueError(f"{u} is not a unit")
    elems = [int(x) for x in g.fiber(u, u)]
    index = {x: i for i, x in enumerate(elems)}
    table = np.array([[index[int(g.comp[a, b])] for b in elems] for a in elems], dtype=np.int64)
    return FiniteGroup(table=table, name=f"isotropy({u})", elements=tuple(elems))


def transversal(g: FiniteGroupoid, component: Sequence[int], base: int) -> dict[int, int]:
    """Smallest-id arrow t_u in G_base^u for every unit u of ``component``."""
    comp = [int(u) for u in component]
    if base not in comp:
        raise ValueError(f"base unit {base} is not in the component {comp}")
    out = {}
    for u in comp:
        fib = g.fiber(base, u)
        if len(fib) == 0:
            raise ValueError(f"unit {u} is not connected to base {base}")
        out[u] = int(fib[0])
    return out


def composable_triples(g: FiniteGroupoid):
    """Iterate over all (x, y, z) with xy and yz defined."""
    for x, y in itertools.product(g.arrows, repeat=2):
        if g.comp[x, y] < 0:
            continue
        for z in np.flatnonzero(g.comp[y] >= 0):
            yield x, y, int(z)
