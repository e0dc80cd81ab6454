import numpy as np
import pytest

from tannaka.errors import DecompositionError
from tannaka.groupoid import build, group, isotropy, pair, transversal
from tannaka.irreps import group_irreps, haar_unitary
from tannaka.reps import (Dual, conjugate, conjugate_by, decompose, direct_sum,
                          dual_rep, induce, intertwiners, orthogonality_report, regular_module, tensor,
                          trivial_rep, unitary_dual)

from conftest import EXAMPLES, dual_of, groupoid


def mor_dim_oracle(p1, p2):
    """dim Mor(p1, p2) by a column-major vectorization and a plain rank computation."""
    g = p1.groupoid
    sizes = [p2.dims[u] * p1.dims[u] for u in g.units]
    offs = np.concatenate([[0], np.cumsum(sizes)])
    rows = []
    for x in g.arrows:
        s, r = int(g.src[x]), int(g.rng[x])
        a, b = p1(x), p2(x)
        if a.size == 0:
            continue
        # vec_F(h a) = (a^T kron I) vec_F(h), vec_F(b h) = (I kron b) vec_F(h)
        blk = np.zeros((b.shape[0] * a.shape[1], offs[-1]), dtype=complex)
        blk[:, offs[r]:offs[r + 1]] += np.kron(a.T, np.eye(p2.dims[r]))
        blk[:, offs[s]:offs[s + 1]] -= np.kron(np.eye(p1.dims[s]), b)
        rows.append(blk)
    if offs[-1] == 0:
        return 0
    m = np.vstack(rows) if rows else np.zeros((0, offs[-1]))
    return int(offs[-1] - np.linalg.matrix_rank(m, tol=1e-8))


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_sum_rule_exact(name):
    for total, arrows in dual_of(name).sum_rule().values():
        assert total == arrows


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_dual_irreps_valid(name):
    dual = dual_of(name)
    for ir in dual:
        assert ir.rep.functoriality_residual() < 1e-10
        assert ir.rep.unitarity_residual() < 1e-10
        assert mor_dim_oracle(ir.rep, ir.rep) == 1
        support = {int(dual.groupoid.component_of[u]) for u in dual.groupoid.units if ir.rep.dims[u]}
        assert support == {ir.label[0]}


def test_pair3_single_irrep_matches_regular_module():
    dual = dual_of("pair3")
    assert len(dual) == 1
    assert dual[(0, 0)].rep.dims == (1, 1, 1)
    reg = regular_module(groupoid("pair3"))
    # the regular module is three copies of the unique irrep
    assert mor_dim_oracle(dual[(0, 0)].rep, reg) == 3


def test_irrep_counts():
    assert len(dual_of("bundle_C2_2")) == 2
    assert all(d == 1 for ir in dual_of("bundle_C2_2") for d in ir.rep.dims)
    dual = dual_of("union_C2_pair2")
    assert len(dual) == 3
    assert sorted(l[0] for l in dual.labels) == [0, 0, 1]


def test_induce_pair_trivial():
    g = build(pair(2))
    rep = dual_of("pair2")[(0, 0)].rep
    assert all(np.allclose(rep(x), 1) for x in g.arrows)


def test_induce_bundle_sign():
    g = groupoid("bundle_C2_2")
    rep = dual_of("bundle_C2_2")[(0, 1)].rep
    for x in g.arrows:
        h = g.names[x][0]
        assert np.allclose(rep(x), [[(-1) ** h]])


def test_induce_one_unit_is_identity():
    g = groupoid("S3")
    sigma = group_irreps(isotropy(g, 0))[2]
    ir = induce(g, [0], 0, transversal(g, [0], 0), sigma, label=(0, 2))
    assert np.allclose(np.stack([ir.rep(x) for x in g.arrows]), sigma.mats)


def test_induce_rejects_wrong_group():
    g = groupoid("S3")
    sigma = group_irreps(isotropy(build(group("C2")), 0))[1]
    with pytest.raises(ValueError):
        induce(g, [0], 0, transversal(g, [0], 0), sigma, label=(0, 1))


def test_tensor_and_sum():
    g = groupoid("C2")
    dual = dual_of("C2")
    sgn = dual[(0, 1)].rep
    ss = tensor(sgn, sgn)
    assert np.allclose([ss(x)[0, 0] for x in g.arrows], 1)
    assert mor_dim_oracle(tensor(trivial_rep(g), sgn), sgn) == 1
    two = dual_of("S3")[(0, 2)].rep
    ds = direct_sum(two, dual_of("S3")[(0, 1)].rep)
    assert ds.dims == (3,)
    assert ds.functoriality_residual() < 1e-12


def test_tensor_groupoid_mismatch():
    with pytest.raises(ValueError):
        tensor(dual_of("C2")[(0, 0)].rep, dual_of("C4")[(0, 0)].rep)


def test_conjugate_and_dual():
    g = groupoid("C4")
    dual = dual_of("C4")
    assert np.allclose(np.stack(conjugate(trivial_rep(g)).mats), 1)
    for ir in dual_of("bundle_S3_2"):
        c, d = conjugate(ir.rep), dual_rep(ir.rep)
        assert all(np.allclose(c(x), d(x)) for x in ir.rep.groupoid.arrows)
    # the character i -> i pairs with i -> -i
    gen = next(x for x in g.arrows if np.isclose(dual[(0, 1)].rep(x)[0, 0], 1j) or
               np.isclose(dual[(0, 1)].rep(x)[0, 0], -1j))
    lam = dual[(0, 1)].rep(gen)[0, 0]
    other = next(l for l in dual.labels if np.isclose(dual[l].rep(gen)[0, 0], np.conj(lam)))
    assert np.isclose(dual_rep(dual[(0, 1)].rep)(gen)[0, 0], dual[other].rep(gen)[0, 0])
    assert dual.conjugate_pair((0, 1))[0] == other


def test_double_dual_equivalent():
    for ir in dual_of("bundle_S3_2"):
        dd = dual_rep(dual_rep(ir.rep))
        assert mor_dim_oracle(ir.rep, dd) == 1


def test_intertwiner_dimensions():
    dual = dual_of("C2")
    triv, sgn = dual[(0, 0)].rep, dual[(0, 1)].rep
    assert len(intertwiners(sgn, sgn)) == 1
    assert len(intertwiners(triv, sgn)) == 0
    two = dual_of("S3")[(0, 2)].rep
    assert len(intertwiners(direct_sum(two, two), two)) == 2


@pytest.mark.parametrize("name", ["S3", "bundle_C2_2", "bundle_S3_2", "union_C2_pair2", "Q8"])
def test_intertwiners_match_rank_oracle(name):
    g = groupoid(name)
    dual = dual_of(name)
    reg = regular_module(g)
    for ir in dual:
        basis = intertwiners(ir.rep, reg)
        assert len(basis) == mor_dim_oracle(ir.rep, reg)
        for h in basis:
            assert h.residual(ir.rep, reg) < 1e-9
        gram = np.array([[sum(np.vdot(a.blocks[u], b.blocks[u]) for u in g.units) for b in basis] for a in basis])
        assert np.allclose(gram, np.eye(len(basis)), atol=1e-10)


def test_decompose_examples():
    dual = dual_of("C2")
    sgn = dual[(0, 1)].rep
    dec = decompose(sgn, dual)
    assert dec.multiplicities == {(0, 0): 0, (0, 1): 1}
    assert decompose(tensor(sgn, sgn), dual).multiplicities[(0, 0)] == 1
    reg = decompose(regular_module(groupoid("C2")), dual)
    assert reg.multiplicities == {(0, 0): 1, (0, 1): 1}


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_regular_module_reassembles(name):
    g = groupoid(name)
    dual = dual_of(name)
    dec = decompose(regular_module(g), dual)
    assert dec.reassembly_residual(dual) < 1e-9
    for u in g.units:
        assert sum(m * dual.dim(l, u) for l, m in dec.multiplicities.items()) == dec.rep.dims[u]


def test_decompose_seeded_bases_differ_but_reassemble():
    g = groupoid("bundle_S3_2")
    dual = dual_of("bundle_S3_2")
    reg = regular_module(g)
    a, b = decompose(reg, dual, seed=1), decompose(reg, dual, seed=2)
    assert not np.allclose(a.unitaries[0], b.unitaries[0])
    assert a.reassembly_residual(dual) < 1e-9 and b.reassembly_residual(dual) < 1e-9


def test_incomplete_dual_names_deficit():
    g = groupoid("S3")
    full = dual_of("S3")
    partial = Dual(g, [full[(0, 0)], full[(0, 1)]])
    with pytest.raises(DecompositionError, match="cover 2 of 6"):
        decompose(regular_module(g), partial)


def test_conjugate_by_unitary_is_equivalent(rng):
    two = dual_of("bundle_S3_2")[(0, 2)].rep
    us = [haar_unitary(d, rng) for d in two.dims]
    moved = conjugate_by(two, us)
    assert moved.unitarity_residual() < 1e-10
    assert mor_dim_oracle(two, moved) == 1


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_orthogonality(name):
    rep = orthogonality_report(groupoid(name), dual_of(name))
    assert rep["max_residual"] < 1e-9
    assert rep["pairs_checked"] > 0


def test_orthogonality_c2_by_hand():
    g = groupoid("C2")
    sgn = dual_of("C2")[(0, 1)].rep
    w = 0.5
    vals = np.array([sgn(x)[0, 0] for x in g.arrows])
    assert np.isclose(w * np.sum(vals * vals.conj()), 1.0)
    assert np.isclose(w * np.sum(vals), 0.0)


def test_dual_determinism():
    a, b = unitary_dual(groupoid("bundle_S3_2"), seed=4), unitary_dual(groupoid("bundle_S3_2"), seed=4)
    for l in a.labels:
        assert all(np.array_equal(a[l].rep(x), b[l].rep(x)) for x in a.groupoid.arrows)
