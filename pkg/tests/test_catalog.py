import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aronberner import catalog
from aronberner.limits import REGULAR, six_extensions
from aronberner.signatures import CANONICAL
from aronberner.tensor import compose_bilinear, evaluate, vector


def unit(n, a):
    e = np.zeros(n)
    e[a - 1] = 1.0
    return e


def net_vectors(spec, n):
    return [[net(k) for k in range(1, net.dim + 1)] if net.kind != "constant" else [net(1)] for net in spec.nets(n)]


@pytest.mark.parametrize("name", catalog.names())
@pytest.mark.parametrize("n", [1, 3, 6])
def test_backends_agree_on_every_index_triple(name, n):
    spec = catalog.get(name)
    T = spec.finite_dim_instance(n)
    f = spec.sequence_instance(n)
    assert T.dims == f.dims
    for x, y, z in itertools.product(*net_vectors(spec, n)):
        direct = evaluate(T, *(vector(v, s) for v, s in zip((x, y, z), "XYZ"))).coords
        assert np.array_equal(direct, f(x, y, z)), (name, x, y, z)


@pytest.mark.parametrize("name", catalog.names())
def test_backends_agree_on_dyadic_vectors(name):
    rng = np.random.default_rng(5)
    spec = catalog.get(name)
    T, f = spec.finite_dim_instance(4), spec.sequence_instance(4)
    for _ in range(20):
        xs = [rng.integers(-4, 5, size=d) / 4.0 for d in T.dims[:3]]
        direct = evaluate(T, *(vector(v, s) for v, s in zip(xs, "XYZ"))).coords
        assert np.allclose(direct, f(*xs), rtol=1e-13, atol=1e-13)


def test_triangular_indicator_examples():
    f = catalog.triangular("ijk").sequence_instance(3)
    assert f(unit(3, 1), unit(3, 2), unit(3, 3)).tolist() == [1.0]
    assert f(unit(3, 3), unit(3, 2), unit(3, 1)).tolist() == [0.0]


@pytest.mark.parametrize("pattern", catalog.PATTERNS)
def test_triangular_tensor_is_the_pattern_indicator(pattern):
    n = 4
    T = catalog.triangular(pattern).finite_dim_instance(n)
    for i, j, k in itertools.product(range(n), repeat=3):
        pos = {"i": i, "j": j, "k": k}
        lo, mid, hi = (pos[c] for c in pattern)
        assert T.entries[i, j, k, 0] == float(lo <= mid <= hi)


def test_triangular_fingerprints_are_distinct():
    prints = {catalog.fingerprint(p) for p in catalog.PATTERNS}
    assert prints == {"".join(q) for q in itertools.permutations("abc")}


@pytest.mark.parametrize("pattern", catalog.PATTERNS)
def test_triangular_six_extensions_single_one(pattern):
    spec = catalog.triangular(pattern)
    rep = six_extensions(spec.sequence_instance(50), spec.nets(50))
    ones = [r.order.ascii for r in rep.results if r.scalar == 1.0]
    assert ones == [catalog.fingerprint(pattern)]


def test_rank_one_constant_sequences():
    f = catalog.rank_one(phi=lambda n: 1.0, psi=lambda n: 1.0).sequence_instance(4)
    for a, b, c in itertools.product(range(1, 5), repeat=3):
        assert np.array_equal(f(unit(4, a), unit(4, b), unit(4, c)), unit(4, c))


def test_rank_one_hand_tensor():
    T = catalog.rank_one(phi=[1.0, 0.0], psi=[0.0, 1.0]).finite_dim_instance(2)
    assert T.sig == CANONICAL
    for i, j, k, l in itertools.product(range(2), repeat=4):
        assert T.entries[i, j, k, l] == (i == 0) * (j == 1) * (k == l)


@given(
    st.integers(-8, 8), st.integers(-8, 8), st.integers(-8, 8),
    st.integers(0, 3), st.integers(-4, 4),
)
@settings(max_examples=15, deadline=None)
def test_rank_one_with_convergent_sequences_is_regular(p, q, r, k, head):
    # phi_n = p/4 + q/(4n) approaches its limit like 1/n; psi is eventually constant
    phi = lambda n: p / 4 + q / (4 * n)
    psi = lambda n: head / 4 if n <= k else r / 4
    spec = catalog.rank_one(phi, psi)
    rep = six_extensions(spec.sequence_instance(50), spec.nets(50))
    assert rep.classification == REGULAR
    assert abs(rep.results[0].value[-1] - (p / 4) * (r / 4)) <= 1e-9


def test_reflexive_middle_examples():
    spec = catalog.reflexive_middle()
    f = spec.sequence_instance(3)
    one = np.array([1.0])
    assert f(unit(3, 1), one, unit(3, 2)).tolist() == [1.0]
    assert f(unit(3, 2), one, unit(3, 1)).tolist() == [0.0]
    assert spec.nets(3)[1].kind == "constant"
    T = spec.finite_dim_instance(3)
    assert T.dims == (3, 1, 3, 1)


@pytest.mark.parametrize("name", ["composed-regular", "composed-irregular"])
def test_composed_finite_instance_is_compose_bilinear(name):
    ingredients = {
        "composed-regular": (catalog.functional_times_vector(), catalog.rank_one_bilinear()),
        "composed-irregular": (catalog.scalar_multiplication(), catalog.triangular_bilinear()),
    }
    g, m = ingredients[name]
    n = 4
    T = catalog.get(name).finite_dim_instance(n)
    assert np.array_equal(T.entries, compose_bilinear(g.tensor(n), m.tensor(n)).entries)
    # evaluation oracle: run m, then g
    rng = np.random.default_rng(9)
    m_ev, g_ev = m.evaluator(n), g.evaluator(n)
    for _ in range(50):
        xs = [rng.uniform(-1, 1, d) for d in T.dims[:3]]
        direct = evaluate(T, *(vector(v, s) for v, s in zip(xs, "XYZ"))).coords
        assert np.allclose(direct, g_ev(m_ev(xs[0], xs[1]), xs[2]), rtol=1e-12, atol=1e-12)


def test_composed_mismatch():
    bad = catalog.composed(catalog.scalar_multiplication(), catalog.rank_one_bilinear())
    with pytest.raises(ValueError, match="lands in dimension"):
        bad.finite_dim_instance(3)
    with pytest.raises(ValueError, match="lands in dimension"):
        bad.sequence_instance(3)


def test_catalog_errors():
    with pytest.raises(KeyError, match="unknown example"):
        catalog.get("triangular-xyz")
    with pytest.raises(ValueError):
        catalog.triangular("iij")
    with pytest.raises(ValueError, match="finite"):
        catalog.rank_one(phi=lambda n: float("nan")).sequence_instance(3)
    with pytest.raises(ValueError, match="terms"):
        catalog.rank_one(phi=[1.0]).finite_dim_instance(3)


def test_primary_names_are_registered():
    for name in catalog.PRIMARY_NAMES:
        assert catalog.get(name).name == name
    assert len(catalog.names()) == 10
