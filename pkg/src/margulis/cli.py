"""Command-line front end: ``margulis {spectrum,plot,recurrence,equivalence}``.

Exit codes: 0 success, 2 configuration error, 3 verification failure,
4 numerical guard tripped.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .affine import AffinePoint, FlowState, margulis_invariant
from .errors import (
    ContainmentViolated,
    DegenerateAxis,
    DisksOverlap,
    GridTooCoarse,
    InsufficientHorizon,
    IterationCapExceeded,
    MargulisError,
    NotHyperbolic,
)
from .neutralized import (
    axes_distinct,
    orbit_equivalence_periodic,
    write_correspondences_csv,
    write_correspondences_json,
)
from .recurrence import (
    axis_state,
    eventually_monotone,
    off_limit_null_state,
    random_timelike_state,
    recurrence_probe,
)
from .schottky import GroupPresentation, data_path, limit_set, spectrum, verify_ping_pong
from .svg import Canvas, arc_points, klein
from .words import (
    enumerate_classes,
    free_reduce,
    is_primitive,
    letter_name,
    letters,
    primitive_root,
    word_from_str,
    word_to_str,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3
EXIT_NUMERIC = 4

SIGN_MARGIN = 1e-9
SPECTRUM_COLUMNS = ["word", "length", "ell", "alpha", "alpha_over_ell"]

_NUMERIC = (DegenerateAxis, GridTooCoarse, InsufficientHorizon, IterationCapExceeded)
_VERIFY = (DisksOverlap, ContainmentViolated, NotHyperbolic)


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    command: str
    presentation: str
    max_len: int
    eps: float
    t_max: float
    dt: float
    seed: int
    out: str
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _nonneg_int(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return n


def _positive_float(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--presentation", default=None,
                        help="presentation JSON (default: bundled reference deformation)")
    common.add_argument("--max-len", type=_positive_int, default=4, help="longest conjugacy class (default 4)")
    common.add_argument("--eps", type=_positive_float, default=1e-2, help="return tolerance for recurrence")
    common.add_argument("--t-max", type=_positive_float, default=200.0, help="recurrence horizon")
    common.add_argument("--dt", type=_positive_float, default=1e-2, help="recurrence time step")
    common.add_argument("--seed", type=int, default=0, help="seed for random probes")
    common.add_argument("--out", default=".", help="output directory")

    p = argparse.ArgumentParser(prog="margulis", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="Margulis spectrum and sign verdict")
    plot = sub.add_parser("plot", parents=[common], help="SVG pictures in the Klein disk")
    plot.add_argument("--chords", type=_nonneg_int, default=2,
                      help="draw axes of classes up to this length")
    rec = sub.add_parser("recurrence", parents=[common], help="recurrence probes")
    rec.add_argument("--random-timelike", type=_nonneg_int, default=0, help="number of random timelike probes")
    rec.add_argument("--null", type=_nonneg_int, default=0, help="number of null probes aimed off the limit set")
    rec.add_argument("--axis-probes", type=_nonneg_int, default=0,
                     help="one axis probe per primitive class up to this length")
    rec.add_argument("--probes", default=None, help="JSON list of probe specifications")
    sub.add_parser("equivalence", parents=[common], help="periodic orbit correspondence")
    return p


def load_presentation(path: str | None) -> GroupPresentation:
    target = Path(path) if path else data_path("reference.json")
    try:
        G = GroupPresentation.load(target)
    except FileNotFoundError:
        raise ConfigError(f"presentation file not found: {target}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed presentation {target}: {exc}") from None
    missing = [letter_name(x) for x in letters(G.rank) if x not in G.disks]
    if missing:
        raise ConfigError(f"presentation {target} has no disk for {', '.join(missing)}")
    return G


def _out_dir(path: str) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}") from None
    return out


def _write_json(path: Path, data) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=False)
        fh.write("\n")


# -- spectrum ---------------------------------------------------------------


def sign_verdict(rows, margin: float = SIGN_MARGIN) -> dict:
    alphas = [r[2] for r in rows]
    pos = [r for r in rows if r[2] > margin]
    neg = [r for r in rows if r[2] < -margin]
    uniform = len(pos) == len(rows) or len(neg) == len(rows)
    verdict = {"verdict": "PASS" if uniform else "FAIL", "min_alpha": min(alphas), "max_alpha": max(alphas)}
    if not uniform:
        witnesses = []
        if pos:
            witnesses.append(word_to_str(pos[0][0]))
        if neg:
            witnesses.append(word_to_str(neg[0][0]))
        small = [r for r in rows if abs(r[2]) <= margin]
        witnesses.extend(word_to_str(r[0]) for r in small[: 2 - len(witnesses)])
        verdict["witnesses"] = witnesses
    return verdict


def cmd_spectrum(cfg: ExperimentConfig, G: GroupPresentation) -> int:
    out = _out_dir(cfg.out)
    rows = sorted(spectrum(G, cfg.max_len), key=lambda r: (round(r[1], 9), len(r[0])))
    verdict = sign_verdict(rows)
    with open(out / "spectrum.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SPECTRUM_COLUMNS)
        for w, ell, alpha in rows:
            writer.writerow([word_to_str(w), len(w), repr(ell), repr(alpha), repr(alpha / ell)])
    _write_json(out / "spectrum.json", {
        "config": cfg.to_dict(),
        "rows": [
            {"word": word_to_str(w), "length": len(w), "ell": ell, "alpha": a, "alpha_over_ell": a / ell}
            for w, ell, a in rows
        ],
        **verdict,
    })
    line = f"sign uniformity: {verdict['verdict']} ({len(rows)} classes up to length {cfg.max_len})"
    if "witnesses" in verdict:
        line += " witnesses: " + ", ".join(verdict["witnesses"])
    print(line)
    return EXIT_OK if verdict["verdict"] == "PASS" else EXIT_VERIFY


# -- plot -------------------------------------------------------------------


def cmd_plot(cfg: ExperimentConfig, G: GroupPresentation) -> int:
    out = _out_dir(cfg.out)
    lim = limit_set(G, cfg.max_len)
    disk = Canvas()
    disk.circle(0.0, 0.0, 1.0, cls="boundary", fill="none", stroke="#444", stroke_width=1)
    for x in sorted(G.disks, key=lambda k: (abs(k), k < 0)):
        d = G.disks[x]
        disk.polyline(arc_points(d.center_angle, d.radius), cls="arc", fill="none",
                      stroke="#9ab", stroke_width=6)
        c = np.array([np.cos(d.center_angle), np.sin(d.center_angle)]) * 1.06
        disk.text(c[0], c[1], word_to_str((x,)), cls="label", font_size=14, text_anchor="middle")
    chord_len = min(cfg.params.get("chords", 2), cfg.max_len)
    if chord_len >= 1:
        from .schottky import fixed_points

        for w in enumerate_classes(G.rank, chord_len):
            rep, att = fixed_points(G, w)
            disk.line(klein(rep), klein(att), cls="geodesic", stroke="#c63", stroke_width=0.8)
    for p in lim.points:
        x, y = klein(p)
        disk.circle(x, y, 0.006, cls="limit", fill="#000")
    disk.save(out / "limit_set.svg")

    # invariant axes in E, projected to the (x1, x2) plane
    axes = Canvas()
    corr = [orbit_equivalence_periodic(w, G) for w in enumerate_classes(G.rank, min(cfg.max_len, 3))]
    reach = max(1.0, max(float(np.max(np.abs(c.axis.base.coords[:2]))) for c in corr) * 1.5)
    for c in corr:
        p = c.axis.point_at(-reach).coords / reach
        q = c.axis.point_at(reach).coords / reach
        axes.line(p[:2], q[:2], cls="axis", stroke="#36c", stroke_width=0.8)
    axes.save(out / "axes.svg")
    print(f"wrote {out / 'limit_set.svg'} ({len(lim.points)} limit points) and {out / 'axes.svg'}")
    return EXIT_OK


# -- recurrence -------------------------------------------------------------


def _parse_probe(spec, G: GroupPresentation):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"probe must be an object with a 'kind': {spec!r}")
    kind = spec["kind"]
    try:
        if kind == "state":
            point = np.asarray(spec["point"], dtype=float)
            vel = np.asarray(spec["velocity"], dtype=float)
            if point.shape != (3,) or vel.shape != (3,) or not np.any(vel):
                raise ValueError("point and velocity must be 3-vectors, velocity nonzero")
            return f"state:{spec.get('label', '')}", FlowState(AffinePoint(point), vel), None
        if kind == "axis":
            w = word_from_str(spec["word"])
            if not w or free_reduce(w) != w:
                raise ValueError("word must be nonempty and freely reduced")
            if max(abs(x) for x in w) > G.rank:
                raise ValueError(f"word {spec['word']!r} uses letters beyond rank {G.rank}")
            return f"axis:{spec['word']}", axis_state(G, w, float(spec.get("shift", 0.0))), w
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"malformed probe {spec!r}: {exc}") from None
    raise ConfigError(f"unknown probe kind {kind!r}")


def cmd_recurrence(cfg: ExperimentConfig, G: GroupPresentation) -> int:
    out = _out_dir(cfg.out)
    rng = np.random.default_rng(cfg.seed)
    probes = []
    prm = cfg.params
    if prm.get("probes"):
        try:
            with open(prm["probes"]) as fh:
                specs = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read probe file: {exc}") from None
        if not isinstance(specs, list):
            raise ConfigError("probe file must hold a JSON list")
        probes.extend(_parse_probe(s, G) for s in specs)
    for i in range(prm.get("random_timelike", 0)):
        probes.append((f"timelike:{i}", random_timelike_state(rng), None))
    for i in range(prm.get("null", 0)):
        probes.append((f"null:{i}", off_limit_null_state(G, rng), None))
    if prm.get("axis_probes", 0):
        for w in enumerate_classes(G.rank, prm["axis_probes"]):
            if is_primitive(w):
                probes.append((f"axis:{word_to_str(w)}", axis_state(G, w), w))

    reports, summary, violations = [], {}, []
    for label, state, word in probes:
        rep = recurrence_probe(state, G, eps=cfg.eps, t_max=cfg.t_max, dt=cfg.dt)
        entry = {"probe": label, **rep.to_dict()}
        if word is not None:
            expected = abs(margulis_invariant(G.element(primitive_root(word))))
            period = abs(rep.forward_time)
            entry["expected_period"] = expected
            entry["period_ok"] = bool(rep.returned and abs(period - expected) <= 2 * cfg.dt)
            if not entry["period_ok"]:
                violations.append(label)
        elif rep.kind in ("timelike", "null"):
            entry["monotone"] = eventually_monotone(rep.escape_profile) and eventually_monotone(
                rep.backward_escape_profile
            )
            if rep.returned or not entry["monotone"]:
                violations.append(label)
        s = summary.setdefault(rep.kind, {"probes": 0, "returned": 0})
        s["probes"] += 1
        s["returned"] += int(rep.returned)
        reports.append(entry)
    _write_json(out / "recurrence.json", {
        "config": cfg.to_dict(),
        "summary": summary,
        "violations": violations,
        "reports": reports,
    })
    parts = [f"{k}: {v['returned']}/{v['probes']} returned" for k, v in sorted(summary.items())]
    print("recurrence: " + ("; ".join(parts) if parts else "no probes"))
    if violations:
        print("unexpected outcomes: " + ", ".join(violations))
        return EXIT_VERIFY
    return EXIT_OK


# -- equivalence ------------------------------------------------------------


def cmd_equivalence(cfg: ExperimentConfig, G: GroupPresentation) -> int:
    out = _out_dir(cfg.out)
    items = [orbit_equivalence_periodic(w, G) for w in enumerate_classes(G.rank, cfg.max_len)]
    write_correspondences_csv(items, out / "equivalence.csv")
    write_correspondences_json(items, out / "equivalence.json")
    bad_dir = [word_to_str(c.word) for c in items if np.max(np.abs(c.neutral - c.axis.direction)) > 1e-9]
    prim = [c for c in items if is_primitive(c.word)]
    clashes = [
        (word_to_str(a.word), word_to_str(b.word))
        for i, a in enumerate(prim)
        for b in prim[i + 1:]
        if not axes_distinct(a.axis, b.axis)
    ]
    print(f"equivalence: {len(items)} classes, direction mismatches {len(bad_dir)}, "
          f"coincident primitive axes {len(clashes)}")
    return EXIT_OK if not bad_dir and not clashes else EXIT_VERIFY


COMMANDS = {
    "spectrum": cmd_spectrum,
    "plot": cmd_plot,
    "recurrence": cmd_recurrence,
    "equivalence": cmd_equivalence,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {}
    for key in ("chords", "random_timelike", "null", "axis_probes", "probes"):
        if hasattr(args, key):
            params[key] = getattr(args, key)
    cfg = ExperimentConfig(
        command=args.command,
        presentation=args.presentation or "reference",
        max_len=args.max_len,
        eps=args.eps,
        t_max=args.t_max,
        dt=args.dt,
        seed=args.seed,
        out=args.out,
        params=params,
    )
    try:
        G = load_presentation(args.presentation)
        verify_ping_pong(G)
        return COMMANDS[args.command](cfg, G)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _VERIFY as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except _NUMERIC as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except MargulisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
