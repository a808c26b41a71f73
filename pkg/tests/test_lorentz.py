import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from margulis.errors import InvalidLorentzTransform, NotHyperbolic
from margulis.lorentz import (
    CausalType,
    TransformType,
    boost_a,
    causal_type,
    classify_transform,
    det3,
    eigen_frame,
    inner,
    is_orthochronous_special,
    lorentz_cross,
    lorentz_inverse,
    norm2,
    random_so21,
    rotation,
)

E1, E2, E3 = np.eye(3)
finite = st.floats(-10, 10, allow_nan=False)
vec = st.tuples(finite, finite, finite).map(np.array)


def test_inner_examples():
    assert inner(E1, E1) == 1.0
    assert inner(E3, E3) == -1.0
    assert inner([0, 1, 1], [0, 1, 1]) == 0.0


@given(vec, vec, vec, finite)
def test_inner_symmetric_bilinear(u, v, w, c):
    assert inner(u, v) == inner(v, u)
    assert np.isclose(inner(u + c * v, w), inner(u, w) + c * inner(v, w), atol=1e-9)


def test_causal_type_examples():
    assert causal_type([0, 1, 0]) is CausalType.SPACELIKE
    assert causal_type([0, 0, 2]) is CausalType.TIMELIKE
    assert causal_type([3, 4, 5]) is CausalType.NULL
    assert causal_type([0, 0, 0]) is CausalType.ZERO
    assert causal_type([0, 1e-7, 0]) is CausalType.NULL  # |<v,v>| = 1e-14 is within tolerance


def test_lorentz_cross_examples():
    # oracle: solve <w, z> = det(e1, e2, z) on the basis
    assert np.allclose(lorentz_cross(E1, E2), [0, 0, -1])
    assert np.allclose(lorentz_cross(E2, E3), [1, 0, 0])
    assert np.allclose(lorentz_cross(E2, E2), 0)


def test_lorentz_cross_identity(rng):
    u, v, w = rng.normal(size=(3, 1000, 3))
    lhs = inner(lorentz_cross(u, v), w)
    rhs = np.linalg.det(np.stack([u, v, w], axis=-1))
    assert np.all(np.abs(lhs - rhs) <= 1e-10 * np.maximum(1, np.abs(rhs)))


def test_boost_group_law():
    assert np.array_equal(boost_a(0.0), np.eye(3))
    assert np.allclose(boost_a(1) @ boost_a(2), boost_a(3), atol=1e-12)
    assert np.array_equal(boost_a(1) @ E1, E1)


def test_isometry_invariance(rng):
    for _ in range(200):
        a = random_so21(rng)
        v, w = rng.normal(size=(2, 3))
        assert abs(inner(a @ v, a @ w) - inner(v, w)) < 1e-10 * max(1, np.abs(a).max() ** 2)
        assert is_orthochronous_special(a)
        assert np.allclose(lorentz_inverse(a) @ a, np.eye(3), atol=1e-9)


def test_classify_examples():
    assert classify_transform(boost_a(1)) is TransformType.HYPERBOLIC
    assert classify_transform(rotation(np.pi / 2)) is TransformType.ELLIPTIC
    assert classify_transform(np.eye(3)) is TransformType.IDENTITY
    # exp of a nilpotent element of so(2,1): I + M + M^2/2 with M^3 = 0
    m = np.array([[0.0, 1.0, 1.0], [-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    assert np.allclose(m @ m @ m, 0)
    unipotent = np.eye(3) + m + m @ m / 2
    assert is_orthochronous_special(unipotent)
    assert classify_transform(unipotent) is TransformType.PARABOLIC
    with pytest.raises(InvalidLorentzTransform):
        classify_transform(np.diag([2.0, 1.0, 1.0]))


def test_classification_conjugation_invariant(rng):
    for _ in range(100):
        a = random_so21(rng)
        b = random_so21(rng, 1.0)
        assert classify_transform(a) is classify_transform(b @ a @ lorentz_inverse(b))


def test_eigen_frame_of_boost():
    # oriented frame: det(x0, x-, x+) > 0 forces x0 = (-1, 0, 0) for a(1)
    ef = eigen_frame(boost_a(1.0))
    assert np.allclose(ef.x_minus, [0, -1, 1])
    assert np.allclose(ef.x_plus, [0, 1, 1])
    assert np.allclose(ef.x0, [-1, 0, 0])
    assert np.isclose(ef.ell, 1.0, atol=1e-9)
    assert det3(ef.x0, ef.x_minus, ef.x_plus) > 0


def test_eigen_frame_conjugation_equivariant():
    r = rotation(0.7)
    ef = eigen_frame(r @ boost_a(1.0) @ lorentz_inverse(r))
    base = eigen_frame(boost_a(1.0))
    assert np.allclose(ef.x0, r @ base.x0, atol=1e-12)
    assert np.allclose(ef.x_minus, r @ base.x_minus, atol=1e-12)
    assert np.allclose(ef.x_plus, r @ base.x_plus, atol=1e-12)
    assert np.isclose(ef.ell, 1.0)


def test_eigen_frame_not_hyperbolic():
    with pytest.raises(NotHyperbolic):
        eigen_frame(rotation(np.pi / 2))


@pytest.mark.parametrize("ell", np.linspace(0.1, 5.0, 25))
def test_eigen_frame_length(ell):
    assert abs(eigen_frame(boost_a(ell)).ell - ell) < 1e-9


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 2 * np.pi), st.floats(0.05, 4.0), st.floats(0, 2 * np.pi), st.floats(-1.5, 1.5))
def test_eigen_frame_equations(t1, ell, t2, s):
    r = rotation(t1) @ boost_a(s) @ rotation(t2)
    a = r @ boost_a(ell) @ lorentz_inverse(r)
    ef = eigen_frame(a)
    scale = np.abs(a).max()
    assert np.allclose(a @ ef.x0, ef.x0, atol=1e-9 * scale)
    assert np.allclose(a @ ef.x_plus, np.exp(ef.ell) * ef.x_plus, atol=1e-9 * scale)
    assert np.allclose(a @ ef.x_minus, np.exp(-ef.ell) * ef.x_minus, atol=1e-9 * scale)
    assert abs(norm2(ef.x0) - 1) < 1e-10
    assert abs(inner(ef.x0, ef.x_plus)) < 1e-9 and abs(inner(ef.x0, ef.x_minus)) < 1e-9
    assert abs(norm2(ef.x_plus)) < 1e-9 and abs(norm2(ef.x_minus)) < 1e-9
    assert ef.x_plus[2] == pytest.approx(1.0) and ef.x_minus[2] == pytest.approx(1.0)
    assert det3(ef.x0, ef.x_minus, ef.x_plus) > 0
