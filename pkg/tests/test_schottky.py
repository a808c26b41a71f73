import json

import numpy as np
import pytest

from margulis.affine import AffineIsometry
from margulis.errors import ContainmentViolated, DisksOverlap
from margulis.frames import P0, BoundaryPoint
from margulis.lorentz import boost_a, eigen_frame
from margulis.schottky import (
    Disk,
    GroupPresentation,
    apply_word,
    data_path,
    fixed_points,
    hausdorff_angles,
    limit_set,
    perpendicular_schottky,
    reduce_to_domain,
    reference_deformation,
    spectrum,
    verify_ping_pong,
)
from margulis.words import enumerate_classes, reduced_words


def test_ping_pong_reference():
    rep = verify_ping_pong(perpendicular_schottky(3.0, 0.5))
    assert rep.passed and rep.samples == 10_000 and rep.min_margin > 0


def test_ping_pong_short_translation_fails():
    with pytest.raises(ContainmentViolated) as exc:
        verify_ping_pong(perpendicular_schottky(0.1, 0.5))
    assert exc.value.letter in "aAbB"


def test_ping_pong_overlap():
    g = AffineIsometry(boost_a(2.0), np.zeros(3))
    G = GroupPresentation((g,), {1: Disk(np.pi / 2, 1.0), -1: Disk(np.pi / 2 + 1.5, 1.0)})
    with pytest.raises(DisksOverlap):
        verify_ping_pong(G)


def test_presentation_json_roundtrip(tmp_path):
    G = reference_deformation()
    path = tmp_path / "g.json"
    G.dump(path)
    data = json.loads(path.read_text())
    assert set(data["disks"]) == {"a", "A", "b", "B"}
    assert len(data["generators"][0]["linear"]) == 9
    H = GroupPresentation.load(path)
    for g, h in zip(G.generators, H.generators):
        assert np.array_equal(g.linear, h.linear) and np.array_equal(g.translation, h.translation)
    assert H.disks == G.disks


def test_bundled_presentations_verify():
    for name in ("reference.json", "mixed_sign.json"):
        assert verify_ping_pong(GroupPresentation.load(data_path(name))).passed


def test_limit_set_examples(G_ref):
    ls1 = limit_set(G_ref, 1)
    assert len(ls1.points) == 4
    expected = sorted(
        p.angle for g in G_ref.generators for p in (
            BoundaryPoint.from_vector(eigen_frame(g.linear).x_minus),
            BoundaryPoint.from_vector(eigen_frame(g.linear).x_plus),
        )
    )
    assert np.allclose(sorted(ls1.angles), expected)


def test_limit_set_inside_disks(G_ref):
    ls = limit_set(G_ref, 6)
    for ang in ls.angles:
        assert any(d.contains(ang) for d in G_ref.disks.values())


def test_limit_set_fixed_by_defining_element(G_ref):
    ls = limit_set(G_ref, 5)
    for p, (w, kind) in zip(ls.points, ls.sources):
        a = G_ref.linear(w)
        # projective fixed point: A xi parallel to xi, relative to the size of A
        img = a @ p.vector
        assert np.linalg.norm(np.cross(img, p.vector)) <= 1e-9 * np.abs(a).max()
        lam = img[2]
        assert (lam > 1) == (kind == "attracting")


def test_limit_set_monotone_and_converging(G_ref):
    a4, a6, a8 = (limit_set(G_ref, n).angles for n in (4, 6, 8))
    a5 = limit_set(G_ref, 5).angles
    assert all(np.min(np.abs(a5 - x)) < 1e-9 for x in a4)
    assert hausdorff_angles(a6, a8) < hausdorff_angles(a4, a6)


def test_reduce_examples(G_ref):
    p, w = reduce_to_domain(P0, G_ref)
    assert np.allclose(p, P0) and w == ()
    q = G_ref.linear((1,)) @ P0
    p, w = reduce_to_domain(q, G_ref)
    assert np.allclose(p, P0, atol=1e-9) and w == (-1,)


def test_reduce_recovers_orbit_point(G_ref, rng):
    words = list(reduced_words(2, 5))
    for i in rng.choice(len(words), 20, replace=False):
        q = apply_word(G_ref, words[i], P0)
        p, w = reduce_to_domain(q, G_ref)
        assert np.allclose(p, P0, atol=1e-8)


def test_reduce_invariance(G_ref, rng):
    words = [w for n in range(1, 5) for w in reduced_words(2, n)]
    for _ in range(200):
        r = rng.uniform(0, 2.0)
        th = rng.uniform(0, 2 * np.pi)
        p = np.array([np.sinh(r) * np.cos(th), np.sinh(r) * np.sin(th), np.cosh(r)])
        w = words[rng.integers(len(words))]
        a, _ = reduce_to_domain(p, G_ref)
        b, _ = reduce_to_domain(apply_word(G_ref, w, p), G_ref)
        assert np.allclose(a, b, atol=1e-8)


def test_spectrum_reference_positive(G_ref):
    rows = spectrum(G_ref, 8)
    assert len(rows) == len(enumerate_classes(2, 8))
    assert all(alpha > 0 for _, _, alpha in rows)


def test_fixed_points_order(G_ref):
    rep, att = fixed_points(G_ref, (1,))
    ef = eigen_frame(G_ref.generators[0].linear)
    assert np.allclose(att.vector, ef.x_plus) and np.allclose(rep.vector, ef.x_minus)
