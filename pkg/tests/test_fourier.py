import numpy as np
import pytest

from tannaka.fourier import (as_natural_transformation, convolve, fourier, fourier_on_rep, from_json,
                             inverse_fourier, random_coefficients, random_trig_poly, to_json)
from tannaka.natural import identity, naturality_check
from tannaka.reps import decompose, intertwiners, regular_module

from conftest import EXAMPLES, dual_of, groupoid


def fiber_function(g, uv, rng):
    f = np.zeros(g.n_arrows, dtype=complex)
    fib = g.fiber(*uv)
    f[fib] = rng.standard_normal(len(fib)) + 1j * rng.standard_normal(len(fib))
    return f


def test_c2_examples():
    g, dual = groupoid("C2"), dual_of("C2")
    delta = np.array([1.0, 0.0])
    c = fourier(g, dual.haar, dual, delta)
    assert np.allclose(c[((0, 0), 0, 0)], 0.5) and np.allclose(c[((0, 1), 0, 0)], 0.5)
    c = fourier(g, dual.haar, dual, np.ones(2))
    assert np.allclose(c[((0, 0), 0, 0)], 1) and np.allclose(c[((0, 1), 0, 0)], 0)
    c = fourier(g, dual.haar, dual, np.zeros(2))
    assert all(np.all(m == 0) for m in c.coef.values())


def test_c2_identity_indicator_roundtrip():
    g, dual = groupoid("C2"), dual_of("C2")
    delta = np.array([1.0, 0.0])
    back = inverse_fourier(dual, fourier(g, dual.haar, dual, delta), (0, 0))
    assert np.allclose(back, delta)


def test_trivial_coefficient_gives_constant():
    dual = dual_of("bundle_S3_2")
    g = groupoid("bundle_S3_2")
    coef = random_coefficients(dual, (0, 1), seed=0)
    for key in coef.coef:
        coef.coef[key] = np.zeros_like(coef.coef[key])
    assert np.all(inverse_fourier(dual, coef, (0, 1)) == 0)
    coef.coef[((0, 0), 0, 1)] = np.ones((1, 1))
    f = inverse_fourier(dual, coef, (0, 1))
    assert np.allclose(f[g.fiber(0, 1)], 1)


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_roundtrip(name, rng):
    g, dual = groupoid(name), dual_of(name)
    for uv in g.nonempty_fibers():
        for _ in range(5):
            f = fiber_function(g, uv, rng)
            back = inverse_fourier(dual, fourier(g, dual.haar, dual, f, fibers=[uv]), uv)
            assert np.abs(back - f).max() < 1e-9


def test_linearity(rng):
    g, dual = groupoid("bundle_S3_2"), dual_of("bundle_S3_2")
    f1, f2 = rng.standard_normal(g.n_arrows), rng.standard_normal(g.n_arrows) * 1j
    a, b = 0.7 - 0.2j, 1.5
    lhs = fourier(g, dual.haar, dual, a * f1 + b * f2)
    c1, c2 = fourier(g, dual.haar, dual, f1), fourier(g, dual.haar, dual, f2)
    for key in lhs.coef:
        assert np.allclose(lhs[key], a * c1[key] + b * c2[key], atol=1e-14)


def test_flip_is_bitwise(rng):
    g, dual = groupoid("bundle_S3_2"), dual_of("bundle_S3_2")
    c = fourier(g, dual.haar, dual, rng.standard_normal(g.n_arrows))
    nt = as_natural_transformation(c)
    for (label, u, v), m in c.coef.items():
        assert np.array_equal(nt.block(label, v, u), m)


def test_c2_delta_is_half_identity():
    g, dual = groupoid("C2"), dual_of("C2")
    nt = as_natural_transformation(fourier(g, dual.haar, dual, np.array([1.0, 0.0])))
    assert nt.distance(identity(dual) * 0.5) < 1e-15


@pytest.mark.parametrize("name", ["S3", "bundle_C2_2", "bundle_S3_2"])
def test_fourier_is_natural(name, rng):
    g, dual = groupoid(name), dual_of(name)
    reg = regular_module(g)
    dreg = decompose(reg, dual)
    decs = {ir.label: decompose(ir.rep, dual) for ir in dual}
    hs = {ir.label: intertwiners(ir.rep, reg) for ir in dual}
    for _ in range(20):
        nt = as_natural_transformation(fourier(g, dual.haar, dual, rng.standard_normal(g.n_arrows)))
        for ir in dual:
            for h in hs[ir.label]:
                assert naturality_check(nt, ir.rep, reg, h, decs[ir.label], dreg) < 1e-9


def test_extension_matches_direct_transform(rng):
    # the flipped transform, extended to the regular module, is the direct sum over that module
    g, dual = groupoid("bundle_S3_2"), dual_of("bundle_S3_2")
    reg = regular_module(g)
    dreg = decompose(reg, dual)
    from tannaka.natural import extend
    f = rng.standard_normal(g.n_arrows) + 1j * rng.standard_normal(g.n_arrows)
    nt = as_natural_transformation(fourier(g, dual.haar, dual, f))
    for u, v in g.nonempty_fibers():
        direct = fourier_on_rep(g, dual.haar, f, reg, (u, v))
        assert np.abs(extend(nt, reg, dreg, (v, u)) - direct).max() < 1e-12


def convolve_oracle(g, f1, f2, uwv):
    """Direct double sum over pairs (y, z) with y z = x, weighted by the middle fiber."""
    u, w, v = uwv
    out = np.zeros(g.n_arrows, dtype=complex)
    size = len(g.fiber(w, v))
    for y in g.fiber(w, v):
        for z in g.fiber(u, w):
            out[g.comp[y, z]] += f1[y] * f2[z] / size
    return out


@pytest.mark.parametrize("name", ["bundle_C2_2", "S3", "bundle_S3_2", "pair3"])
def test_convolution_homomorphism(name, rng):
    g, dual = groupoid(name), dual_of(name)
    triples = [(u, w, v) for u in g.units for w in g.units for v in g.units
               if len(g.fiber(u, w)) and len(g.fiber(w, v))]
    for k in range(20):
        u, w, v = triples[k % len(triples)]
        f1, f2 = fiber_function(g, (w, v), rng), fiber_function(g, (u, w), rng)
        h = convolve(g, dual.haar, f1, f2, (u, w, v))
        assert np.abs(h - convolve_oracle(g, f1, f2, (u, w, v))).max() < 1e-12
        ch = fourier(g, dual.haar, dual, h)
        c1, c2 = fourier(g, dual.haar, dual, f1), fourier(g, dual.haar, dual, f2)
        for label in dual.labels_at(u):
            assert np.abs(ch[(label, u, v)] - c2[(label, u, w)] @ c1[(label, w, v)]).max() < 1e-9


def test_convolution_c2_deltas():
    g, dual = groupoid("C2"), dual_of("C2")
    e, s = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    assert np.allclose(convolve(g, dual.haar, e, s, (0, 0, 0)), 0.5 * s)
    assert np.allclose(convolve(g, dual.haar, e, np.zeros(2), (0, 0, 0)), 0)


def test_convolution_unit(rng):
    g, dual = groupoid("bundle_S3_2"), dual_of("bundle_S3_2")
    f1 = fiber_function(g, (0, 1), rng)
    unit = np.zeros(g.n_arrows)
    unit[g.unit_at(0)] = len(g.fiber(0, 0))
    assert np.allclose(convolve(g, dual.haar, f1, unit, (0, 0, 1)), f1)


def test_convolution_empty_fiber():
    g, dual = groupoid("union_C2_pair2"), dual_of("union_C2_pair2")
    with pytest.raises(ValueError):
        convolve(g, dual.haar, np.ones(g.n_arrows), np.ones(g.n_arrows), (0, 1, 1))


def test_random_trig_poly(rng):
    g, dual = groupoid("bundle_S3_2"), dual_of("bundle_S3_2")
    f = random_trig_poly(dual, (1, 0), seed=5)
    assert np.array_equal(f, random_trig_poly(dual, (1, 0), seed=5))
    coef = random_coefficients(dual, (1, 0), seed=5)
    got = fourier(g, dual.haar, dual, f, fibers=[(1, 0)])
    assert got.max_abs_diff(coef) < 1e-9
    with pytest.raises(ValueError):
        random_trig_poly(dual_of("union_C2_pair2"), (0, 1), seed=0)


def test_function_json_roundtrip(rng):
    g = groupoid("S3")
    f = rng.standard_normal(g.n_arrows) + 1j * rng.standard_normal(g.n_arrows)
    assert np.array_equal(from_json(to_json(f), g.n_arrows), f)
