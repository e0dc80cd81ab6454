import numpy as np
import pytest

from tannaka.duality import (MAX_ARROWS, TannakaElement, compose, epsilon_check, extend_function,
                             identity_element, injectivity_separation, integration_check, inverse,
                             p_pi, pairing_residual, reconstruct, rep_of_tannaka, t_star, tannaka_of_x,
                             verify_duality)
from tannaka.errors import ConfigError, ScaleError
from tannaka.fourier import fourier
from tannaka.groupoid import build, group, pair
from tannaka.natural import is_hermitian, is_monoidal
from tannaka.reps import decompose, regular_module, trivial_rep, unitary_dual

from conftest import dual_of, groupoid

ABELIAN = ["C1", "C2", "C4", "C6", "pair2", "pair3", "bundle_C2_2", "bundle_C4_3"]


def test_tannaka_of_x_examples():
    dual = dual_of("C2")
    e, s = tannaka_of_x(dual, 0), tannaka_of_x(dual, 1)
    assert np.allclose(e.blocks[(0, 1)], 1)
    assert np.allclose(s.blocks[(0, 0)], 1) and np.allclose(s.blocks[(0, 1)], -1)
    for x in groupoid("S3").arrows:
        nt = tannaka_of_x(dual_of("S3"), x).as_nt(dual_of("S3"))
        assert is_monoidal(nt) and is_hermitian(nt)


def test_compose():
    g, dual = groupoid("bundle_S3_2"), dual_of("bundle_S3_2")
    xs, ys = np.nonzero(g.comp >= 0)
    for x, y in zip(xs, ys):
        got = compose(tannaka_of_x(dual, x), tannaka_of_x(dual, y))
        assert got.distance(tannaka_of_x(dual, g.comp[x, y])) < 1e-12
    a = tannaka_of_x(dual, 7)
    assert compose(a, identity_element(dual, a.u)).distance(a) < 1e-14
    x01 = g.fiber(0, 1)[0]
    with pytest.raises(ValueError):
        compose(tannaka_of_x(dual, x01), tannaka_of_x(dual, x01))


def test_inverse():
    g, dual = groupoid("bundle_S3_2"), dual_of("bundle_S3_2")
    for x in g.arrows:
        a = tannaka_of_x(dual, x)
        inv = inverse(a, dual)
        assert inv.distance(tannaka_of_x(dual, g.inv[x])) < 1e-9
        assert compose(inv, a).distance(identity_element(dual, a.u)) < 1e-8
        assert compose(a, inv).distance(identity_element(dual, a.v)) < 1e-8
    unit = identity_element(dual, 1)
    assert inverse(unit, dual).distance(unit) < 1e-12
    s = tannaka_of_x(dual_of("C2"), 1)
    assert inverse(s, dual_of("C2")).distance(s) < 1e-12


def test_inverse_missing_label():
    dual = dual_of("C2")
    bogus = TannakaElement(0, 0, {(0, 7): np.eye(1)})
    with pytest.raises(KeyError):
        inverse(bogus, dual)


@pytest.mark.parametrize("name", ["C2", "S3", "bundle_S3_2", "Q8", "union_C2_pair2"])
def test_epsilon(name):
    dual = dual_of(name)
    for label in dual.labels:
        assert epsilon_check(dual, label) < 1e-9
    assert epsilon_check(dual, dual.trivial_label(0)) < 1e-14


def test_epsilon_c2_sign():
    assert epsilon_check(dual_of("C2"), (0, 1)) < 1e-12


def test_pairing_for_image():
    dual = dual_of("bundle_S3_2")
    for x in groupoid("bundle_S3_2").arrows:
        assert pairing_residual(tannaka_of_x(dual, x), dual) < 1e-8


def test_t_star_recovers_reps():
    g, dual = groupoid("bundle_S3_2"), dual_of("bundle_S3_2")
    triv = trivial_rep(g)
    pulled = t_star(rep_of_tannaka(triv, dual), dual)
    assert all(np.allclose(pulled(x), 1) for x in g.arrows)
    for ir in dual_of("C2"):
        back = t_star(rep_of_tannaka(ir.rep, dual_of("C2")), dual_of("C2"))
        assert all(np.allclose(back(x), ir.rep(x)) for x in groupoid("C2").arrows)
    reg = regular_module(g)
    dec = decompose(reg, dual)
    for x in g.arrows:
        assert np.allclose(p_pi(tannaka_of_x(dual, x), dual, reg, dec), reg(x), atol=1e-12)


def test_extend_function():
    g, dual = groupoid("bundle_S3_2"), dual_of("bundle_S3_2")
    uv = (0, 1)
    fib = g.fiber(*uv)
    zero = extend_function(dual, np.zeros(g.n_arrows), uv)
    assert all(zero(tannaka_of_x(dual, x)) == 0 for x in fib)
    for x in fib:
        delta = np.zeros(g.n_arrows)
        delta[x] = 1
        ef = extend_function(dual, delta, uv)
        for y in fib:
            assert abs(ef(tannaka_of_x(dual, y)) - (x == y)) < 1e-9
    one = np.zeros(g.n_arrows)
    one[fib] = 1
    ef = extend_function(dual, one, uv)
    assert all(abs(ef(tannaka_of_x(dual, x)) - 1) < 1e-9 for x in fib)
    with pytest.raises(ValueError):
        ef(tannaka_of_x(dual, g.fiber(1, 1)[0]))


def test_extend_function_inverts_restriction(rng):
    g, dual = groupoid("Q8"), dual_of("Q8")
    f = rng.standard_normal(g.n_arrows) + 1j * rng.standard_normal(g.n_arrows)
    ef = extend_function(dual, f, (0, 0))
    assert max(abs(ef(tannaka_of_x(dual, x)) - f[x]) for x in g.arrows) < 1e-9


def test_integration_examples():
    g, dual = groupoid("S3"), dual_of("S3")
    solved = [tannaka_of_x(dual, x) for x in g.arrows]
    coeff = np.array([dual[(0, 2)].rep(x)[0, 1] for x in g.arrows])
    r1, r2 = integration_check(g, dual, coeff, (0, 0), solved)
    assert r1 < 1e-12 and r2 < 1e-12
    assert abs(fourier(g, dual.haar, dual, coeff)[((0, 0), 0, 0)][0, 0]) < 1e-12
    one = np.ones(g.n_arrows)
    assert max(integration_check(g, dual, one, (0, 0), solved)) < 1e-12
    assert integration_check(g, dual, np.zeros(g.n_arrows), (0, 0)) == (0.0, None)


def solution_set(rec, dual):
    return sorted(tuple(np.round(np.concatenate([m.ravel() for _, m in sorted(s.blocks.items())]), 8))
                  for s in rec.solutions)


def test_reconstruct_trivial_group():
    dual = dual_of("C1")
    rec = reconstruct(groupoid("C1"), dual, (0, 0))
    assert len(rec) == 1
    assert rec[0].distance(tannaka_of_x(dual, 0)) < 1e-12


def test_reconstruct_c2_exact_set():
    dual = dual_of("C2")
    rec = reconstruct(groupoid("C2"), dual, (0, 0))
    assert solution_set(rec, dual) == [(1, -1), (1, 1)]


@pytest.mark.parametrize("name", ABELIAN)
def test_abelian_exact_matches_image(name):
    g, dual = groupoid(name), dual_of(name)
    for uv in g.nonempty_fibers():
        rec = reconstruct(g, dual, uv, method="abelian-exact")
        image = [tannaka_of_x(dual, x) for x in g.fiber(*uv)]
        assert len(rec) == len(image)
        hits = {min(range(len(image)), key=lambda i: s.distance(image[i])) for s in rec}
        assert len(hits) == len(image)
        for s in rec:
            assert min(s.distance(t) for t in image) < 1e-9
            nt = s.as_nt(dual)
            assert is_monoidal(nt) and is_hermitian(nt)
            assert pairing_residual(s, dual) < 1e-8


def test_abelian_exact_rejects_nonabelian():
    with pytest.raises(ConfigError):
        reconstruct(groupoid("S3"), dual_of("S3"), (0, 0), method="abelian-exact")


def test_reconstruct_errors():
    g, dual = groupoid("union_C2_pair2"), dual_of("union_C2_pair2")
    with pytest.raises(ValueError):
        reconstruct(g, dual, (0, 1))
    with pytest.raises(ConfigError):
        reconstruct(g, dual, (0, 0), method="bisection")
    with pytest.raises(ValueError):
        reconstruct(groupoid("C2"), dual, (0, 0))


@pytest.mark.parametrize("name", ["S3", "Q8", "D4", "C4"])
def test_newton_cluster(name):
    g, dual = groupoid(name), dual_of(name)
    rec = reconstruct(g, dual, (0, 0), method="newton-cluster", tol=1e-6)
    assert not rec.partial
    image = [tannaka_of_x(dual, x) for x in g.arrows]
    assert len(rec) == g.n_arrows
    for s in rec:
        assert min(s.distance(t) for t in image) < 1e-6
        assert is_monoidal(s.as_nt(dual)) and is_hermitian(s.as_nt(dual))


def test_newton_deterministic():
    g, dual = groupoid("S3"), dual_of("S3")
    a = reconstruct(g, dual, (0, 0), method="newton-cluster", seed=3)
    b = reconstruct(g, dual, (0, 0), method="newton-cluster", seed=3)
    assert all(x.distance(y) == 0 for x, y in zip(a, b))


def test_injectivity():
    for name in ["C2", "S3", "bundle_S3_2", "pair3", "union_C2_pair2"]:
        assert injectivity_separation(dual_of(name)) > 1e-6


@pytest.mark.parametrize("name, method", [("C2", None), ("pair3", None), ("bundle_C2_2", None),
                                          ("union_C2_pair2", None), ("S3", "newton-cluster")])
def test_verify_duality(name, method):
    g = groupoid(name)
    report = verify_duality(g, method=method, tol=1e-6 if method else 1e-8, n_functions=10,
                            dual=dual_of(name))
    assert report.passed, report.to_json()
    for row in report.fibers:
        assert row["found"] == row["expected"] == len(g.fiber(row["u"], row["v"]))
    if name == "pair3":
        assert all(row["found"] == 1 for row in report.fibers)
    data = report.to_json()
    assert set(data) >= {"injectivity_separation", "fibers", "homomorphism_residual",
                         "integration_residual", "center", "pass"}
    assert {"computed", "claimed"} <= set(data["center"])


def test_verify_config_errors(monkeypatch):
    with pytest.raises(ConfigError):
        verify_duality(groupoid("S3"), method="abelian-exact")
    big = build(pair(45))
    assert big.n_arrows > MAX_ARROWS
    with pytest.raises(ScaleError):
        verify_duality(big)


def test_newton_scale_guard():
    g = build(group([[(a + b) % 25 for b in range(25)] for a in range(25)]))
    with pytest.raises(ScaleError):
        reconstruct(g, unitary_dual(g), (0, 0), method="newton-cluster")


def test_thread_count_does_not_change_report(monkeypatch):
    g = groupoid("bundle_C4_3")
    monkeypatch.setenv("TANNAKA_THREADS", "1")
    a = verify_duality(g, n_functions=5, dual=dual_of("bundle_C4_3")).to_json()
    monkeypatch.setenv("TANNAKA_THREADS", "4")
    b = verify_duality(g, n_functions=5, dual=dual_of("bundle_C4_3")).to_json()
    assert a == b
