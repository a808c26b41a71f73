import numpy as np

from margulis.density import axis_family, density_experiment, distance_to_axes
from margulis.frames import flow_frame, frame_distance, frame_from, frame_on_geodesic
from margulis.lorentz import boost_a, rotation


def brute_distance(frame, n_minus, n_plus):
    # oracle: scan the axis orbit and take the smallest frame distance
    base = frame_on_geodesic(n_minus, n_plus)
    lo, hi = -12.0, 12.0
    for _ in range(6):
        ts = np.linspace(lo, hi, 401)
        d = [frame_distance(frame, flow_frame(base, t)) for t in ts]
        k = int(np.argmin(d))
        step = ts[1] - ts[0]
        lo, hi = ts[k] - step, ts[k] + step
    return d[k]


def test_on_axis_is_zero(G_ref):
    nm, npl = axis_family(G_ref, 2)
    f = flow_frame(frame_on_geodesic(nm[3], npl[3]), 0.7)
    assert distance_to_axes(f, nm, npl)[3] < 1e-9


def test_upper_bound_against_brute_force(G_ref, rng):
    nm, npl = axis_family(G_ref, 2)
    for _ in range(20):
        g = rotation(rng.uniform(0, 2 * np.pi)) @ boost_a(rng.uniform(0, 1.5))
        f = frame_from(g @ [0, 0, 1.0], g @ [0, 1.0, 0])
        i = rng.integers(len(nm))
        fast = distance_to_axes(f, nm[i:i + 1], npl[i:i + 1])[0]
        slow = brute_distance(f, nm[i], npl[i])
        assert slow <= fast + 1e-6
        # the foot of the perpendicular is a near-optimal point for nearby frames
        if fast < 0.3:
            assert fast - slow < 0.05


def test_density_small_run(G_ref):
    rep = density_experiment(G_ref, seed=1, pairs=5, limit_len=5, max_len=6, tolerance=0.5)
    assert rep.samples == 15 and rep.directed_hausdorff <= rep.tolerance and rep.passed
