"""Affine deformations of Schottky groups.

A :class:`GroupPresentation` holds affine generators plus one closed arc
("disk") of the boundary circle per letter.  Ping-pong with these arcs
certifies that the linear parts generate a free discrete group, and supplies
the coarse geometry used by the limit-set and domain-reduction routines.

Presentation JSON::

    {
      "generators": [
        {"linear": [9 reals, row-major], "translation": [3 reals]},
        ...
      ],
      "disks": {"a": {"centerAngle": 1.57, "radius": 0.5}, "A": {...}, ...}
    }

Disk keys are letter names (``a`` = g1, ``A`` = g1^{-1}, ``b`` = g2, ...).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .affine import AffineIsometry, margulis_invariant
from .errors import ContainmentViolated, DisksOverlap, IterationCapExceeded, NotHyperbolic
from .frames import BoundaryPoint, Frame, lift_to_sheet
from .lorentz import (
    TransformType,
    boost_a,
    classify_transform,
    eigen_frame,
    lorentz_inverse,
    rotation,
)
from .words import Word, enumerate_classes, free_reduce, letter_name, letters


def circle_distance(a, b):
    d = np.mod(np.asarray(a) - np.asarray(b) + np.pi, 2.0 * np.pi) - np.pi
    return np.abs(d)


@dataclass(frozen=True)
class Disk:
    """Closed arc of the boundary circle: ``|angle - center| <= radius``."""

    center_angle: float
    radius: float

    def contains(self, angles, strict: bool = False):
        d = circle_distance(angles, self.center_angle)
        return d < self.radius if strict else d <= self.radius


@dataclass(frozen=True, eq=False)
class GroupPresentation:
    generators: tuple[AffineIsometry, ...]
    disks: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "_cache", {})

    @property
    def rank(self) -> int:
        return len(self.generators)

    def letter(self, x: int) -> AffineIsometry:
        cache = self._cache
        if x not in cache:
            g = self.generators[abs(x) - 1]
            cache[x] = g if x > 0 else g.inverse()
        return cache[x]

    def element(self, word: Word) -> AffineIsometry:
        out = AffineIsometry.identity()
        for x in word:
            out = out @ self.letter(x)
        return out

    def linear(self, word: Word) -> np.ndarray:
        out = np.eye(3)
        for x in word:
            out = out @ self.letter(x).linear
        return out

    def disk(self, x: int) -> Disk:
        return self.disks[x]

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "generators": [
                {"linear": g.linear.ravel().tolist(), "translation": g.translation.tolist()}
                for g in self.generators
            ],
            "disks": {
                letter_name(x): {"centerAngle": d.center_angle, "radius": d.radius}
                for x, d in sorted(self.disks.items(), key=lambda kv: letters(self.rank).index(kv[0]))
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GroupPresentation":
        gens = []
        for item in data["generators"]:
            lin = np.asarray(item["linear"], dtype=float)
            tr = np.asarray(item["translation"], dtype=float)
            if lin.size != 9 or tr.size != 3:
                raise ValueError("generator needs 9 linear entries and 3 translation entries")
            gens.append(AffineIsometry(lin.reshape(3, 3), tr))
        disks = {}
        rank = len(gens)
        names = {letter_name(x): x for x in letters(rank)}
        for key, spec in (data.get("disks") or {}).items():
            if key not in names:
                raise ValueError(f"unknown letter {key!r} in disks")
            disks[names[key]] = Disk(float(spec["centerAngle"]), float(spec["radius"]))
        return cls(tuple(gens), disks)

    @classmethod
    def load(cls, path) -> "GroupPresentation":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    def with_translations(self, translations) -> "GroupPresentation":
        gens = tuple(
            AffineIsometry(g.linear, np.asarray(b, dtype=float))
            for g, b in zip(self.generators, translations)
        )
        return GroupPresentation(gens, dict(self.disks))


# -- boundary action and ping-pong ---------------------------------------


def act_on_angles(a, angles) -> np.ndarray:
    """Action of a linear isometry on boundary points given by angle."""
    angles = np.asarray(angles, dtype=float)
    pts = np.stack([np.cos(angles), np.sin(angles), np.ones_like(angles)], axis=-1)
    img = pts @ np.asarray(a, dtype=float).T
    return np.arctan2(img[..., 1], img[..., 0])


def suggest_disks(generators, radius: float) -> dict:
    """Arcs of the given radius around each generator's fixed points.

    The arc for letter ``x`` surrounds the attracting fixed point of ``x``.
    Only a suggestion: correctness rests on :func:`verify_ping_pong`.
    """
    disks = {}
    for i, g in enumerate(generators, start=1):
        ef = eigen_frame(g.linear)
        disks[i] = Disk(BoundaryPoint.from_vector(ef.x_plus).angle, radius)
        disks[-i] = Disk(BoundaryPoint.from_vector(ef.x_minus).angle, radius)
    return disks


@dataclass(frozen=True)
class PingPongReport:
    passed: bool
    samples: int
    min_margin: float  # smallest angular gap between an image and its disk's edge


def verify_ping_pong(G: GroupPresentation, samples: int = 10_000) -> PingPongReport:
    """Sampled ping-pong certificate.

    Checks that the arcs are pairwise disjoint and that each letter maps the
    complement of its inverse's arc strictly inside its own arc.
    """
    alphabet = letters(G.rank)
    for x in alphabet:
        if x not in G.disks:
            raise ValueError(f"no ping-pong disk for letter {letter_name(x)!r}")
        if classify_transform(G.letter(x).linear) is not TransformType.HYPERBOLIC:
            raise NotHyperbolic(f"generator {letter_name(x)!r} is not hyperbolic")
    for i, x in enumerate(alphabet):
        for y in alphabet[i + 1:]:
            dx, dy = G.disks[x], G.disks[y]
            if circle_distance(dx.center_angle, dy.center_angle) <= dx.radius + dy.radius:
                raise DisksOverlap(letter_name(x), letter_name(y))
    grid = np.linspace(-np.pi, np.pi, samples, endpoint=False)
    margin = np.inf
    for x in alphabet:
        source = grid[~G.disks[-x].contains(grid)]
        image = act_on_angles(G.letter(x).linear, source)
        d = G.disks[x]
        gap = d.radius - circle_distance(image, d.center_angle)
        bad = np.nonzero(gap <= 0)[0]
        if bad.size:
            raise ContainmentViolated(letter_name(x), float(source[bad[0]]))
        margin = min(margin, float(gap.min()))
    return PingPongReport(True, samples, margin)


# -- limit set -------------------------------------------------------------


@dataclass(frozen=True)
class LimitSetApprox:
    points: tuple[BoundaryPoint, ...]
    max_len: int
    sources: tuple[tuple[Word, str], ...]  # (word, "attracting" | "repelling") per point

    @property
    def angles(self) -> np.ndarray:
        return np.array([p.angle for p in self.points])


def fixed_points(G: GroupPresentation, word: Word):
    """(repelling, attracting) boundary fixed points of ``L(word)``."""
    ef = eigen_frame(G.linear(word))
    return BoundaryPoint.from_vector(ef.x_minus), BoundaryPoint.from_vector(ef.x_plus)


def limit_set(G: GroupPresentation, max_len: int, dedupe_tol: float = 1e-9) -> LimitSetApprox:
    """Fixed points of every conjugacy class up to ``max_len``, sorted by angle."""
    found: list[tuple[float, BoundaryPoint, Word, str]] = []
    for w in enumerate_classes(G.rank, max_len):
        rep, att = fixed_points(G, w)
        found.append((rep.angle, rep, w, "repelling"))
        found.append((att.angle, att, w, "attracting"))
    found.sort(key=lambda item: item[0])
    kept: list[tuple[float, BoundaryPoint, Word, str]] = []
    for item in found:
        if kept and circle_distance(item[0], kept[-1][0]) <= dedupe_tol:
            continue
        kept.append(item)
    if len(kept) > 1 and circle_distance(kept[0][0], kept[-1][0]) <= dedupe_tol:
        kept.pop()
    return LimitSetApprox(
        points=tuple(k[1] for k in kept),
        max_len=max_len,
        sources=tuple((k[2], k[3]) for k in kept),
    )


def hausdorff_angles(a, b) -> float:
    """Hausdorff distance between two finite subsets of the circle (in radians)."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))

    def directed(x, y):
        d = circle_distance(x[:, None], y[None, :])
        return float(d.min(axis=1).max())

    return max(directed(a, b), directed(b, a))


# -- fundamental domain ----------------------------------------------------


def apply_word(G: GroupPresentation, word: Word, p) -> np.ndarray:
    """``L(word) p`` for a point of H^2, one letter at a time.

    Each step is projected back onto the hyperboloid, which keeps the
    round-off tangential; multiplying out the word first would let the
    off-sheet error grow like ``exp(2 * distance)``.
    """
    p = lift_to_sheet(p)
    for x in reversed(word):
        p = lift_to_sheet(G.letter(x).linear @ p)
    return p


def reduce_to_domain(p, G: GroupPresentation, max_iter: int = 10_000, start: Word = ()):
    """Greedy reduction of a point of H^2 towards ``P0 = (0, 0, 1)``.

    Repeatedly applies the letter that most decreases the hyperbolic distance
    to ``P0`` (equivalently, the third coordinate) until no letter decreases
    it.  Returns ``(representative, word)`` with ``representative =
    L(word) p``.  ``start`` warm-starts from a word already known to bring
    ``p`` close to the domain.
    """
    word = list(start)
    p = apply_word(G, tuple(word), p)
    mats = [(x, G.letter(x).linear) for x in letters(G.rank)]
    for _ in range(max_iter):
        best_x, best_q = None, p
        for x, a in mats:
            q = a @ p
            if q[2] < best_q[2] * (1.0 - 1e-13):
                best_x, best_q = x, q
        if best_x is None:
            return p, free_reduce(tuple(word))
        word.insert(0, best_x)
        p = lift_to_sheet(best_q)
    raise IterationCapExceeded(f"no fixed point of the reduction after {max_iter} steps")


def reduce_frame(g: Frame, G: GroupPresentation, start: Word = ()):
    """Reduce a frame by reducing its basepoint; returns ``(frame, word)``."""
    _, word = reduce_to_domain(g.basepoint, G, start=start)
    return g.act(G.linear(word)), word


# -- spectra ---------------------------------------------------------------


def spectrum(G: GroupPresentation, max_len: int):
    """Rows ``(word, ell, alpha)`` for every class up to ``max_len``."""
    from .lorentz import translation_length

    rows = []
    for w in enumerate_classes(G.rank, max_len):
        el = G.element(w)
        rows.append((w, translation_length(el.linear), margulis_invariant(el)))
    return rows


# -- reference examples ----------------------------------------------------


def perpendicular_schottky(ell: float = 3.0, radius: float = 0.5) -> GroupPresentation:
    """Linear Schottky group on two boosts of length ``ell`` with perpendicular axes.

    The translations are zero; see :func:`reference_deformation`.
    """
    r = rotation(np.pi / 2)
    a1 = boost_a(ell)
    a2 = r @ a1 @ lorentz_inverse(r)
    gens = (AffineIsometry(a1, np.zeros(3)), AffineIsometry(a2, np.zeros(3)))
    return GroupPresentation(gens, suggest_disks(gens, radius))


def reference_deformation(ell: float = 3.0, stretch: float = 3.0) -> GroupPresentation:
    """The reference proper deformation: each generator translated along its own neutral axis.

    Translating ``g_i`` by ``stretch * x0(g_i)`` is the infinitesimal
    deformation lengthening both generators with their axes held fixed; its
    Margulis invariants are positive on every class checked.
    """
    G = perpendicular_schottky(ell)
    return G.with_translations([stretch * eigen_frame(g.linear).x0 for g in G.generators])


def mixed_sign_deformation(ell: float = 3.0, stretch: float = 3.0, ratio: float = -0.5) -> GroupPresentation:
    """Same linear group with the second translation scaled by a negative ``ratio``.

    ``g1`` has positive and ``g2`` negative Margulis invariant.  The default
    ratio is asymmetric so that no short class has a vanishing invariant.
    """
    G = perpendicular_schottky(ell)
    x1 = eigen_frame(G.generators[0].linear).x0
    x2 = eigen_frame(G.generators[1].linear).x0
    return G.with_translations([stretch * x1, ratio * stretch * x2])


def data_path(name: str) -> Path:
    return Path(__file__).with_name("data") / name

