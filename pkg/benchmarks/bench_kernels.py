"""Compare the numpy and numba scan kernels on the package's real workloads.

    python benchmarks/bench_kernels.py [--repeat 3] [--big]

Each workload is run on both backends after one warm-up call (so numba
compile time is excluded) and the results are checked for equality.  The
``--big`` flag adds the pairwise scan of the 1650-point tangent-set of
H(3,625).
"""

import argparse
import time

import numpy as np

from polarset import kernels
from polarset.cubic import beta, build_w3_partial_ovoid
from polarset.forms import PolarSpace
from polarset.geom import all_points
from polarset.lift import cone_lift, make_frame
from polarset.pencil import (
    assemble_tangent_set,
    build_pencil,
    default_w3_ovoid,
    make_config,
    place_seed,
)


def chain_q4():
    S, form = default_w3_ovoid(4)
    cfg = make_config(2, 4)
    ts = assemble_tangent_set(build_pencil(cfg), place_seed(cfg, S, form, "tangent_point"))
    fr = make_frame(ts.form)
    return ts, fr, cone_lift(fr, ts.points)


def workloads(big):
    ts, fr, O = chain_q4()
    H3, H4 = ts.form, fr.form
    T = ts.points.points
    pts3 = all_points(3, H3.F)
    out3 = pts3[~ts.points.contains(pts3)]
    pts4 = PolarSpace(H4).points()
    out4 = pts4[~O.contains(pts4)]
    P = O.points
    F = H4.F
    yield "pair_zero_scan  H(4,16), 257 points", lambda b: b.pair_zero_scan(F, H4.left(P), H4.conj(P))
    yield "cover_scan      H(4,16), 17168 x 257", lambda b: b.cover_scan(F, H4.left(out4), H4.conj(P))
    yield (
        "tangent_cover   H(3,16), 4304 x 65",
        lambda b: b.tangent_cover_scan(H3.F, H3.left(out3), H3.diag(out3), H3.conj(T), H3.diag(T), 5),
    )
    yield "tangent_pair    H(3,16), 65 points", lambda b: b.tangent_pair_scan(H3.F, H3.left(T), H3.conj(T), H3.diag(T), 5)
    A = np.random.default_rng(0).integers(0, 16, size=(4000, 5))
    yield "matmul          GF(16), 4000x5 @ 5x4000", lambda b: b.matmul(F, A, A.T)
    if big:
        S = build_w3_partial_ovoid(25)
        cfg = make_config(2, 25)
        ts = assemble_tangent_set(build_pencil(cfg), place_seed(cfg, S, beta(S.F), "avoid_pi"))
        H, T = ts.form, ts.points.points
        yield (
            "tangent_pair    H(3,625), 1650 points",
            lambda b: b.tangent_pair_scan(H.F, H.left(T), H.conj(T), H.diag(T), 26),
        )


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--big", action="store_true")
    args = ap.parse_args()
    if kernels.NUMBA_BACKEND is None:
        raise SystemExit("numba is not installed; nothing to compare")
    backends = [kernels.NUMPY_BACKEND, kernels.NUMBA_BACKEND]
    print(f"{'workload':<42} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, work in workloads(args.big):
        times, outs = [], []
        for b in backends:
            work(b)  # warm-up
            t, out = timed(lambda w=work, b=b: w(b), args.repeat)
            times.append(t)
            outs.append(out)
        same = all(np.array_equal(np.asarray(outs[0]), np.asarray(o)) for o in outs[1:])
        flag = "" if same else "  MISMATCH"
        print(f"{name:<42} {times[0] * 1e3:>8.1f}ms {times[1] * 1e3:>8.1f}ms {times[0] / times[1]:>7.1f}x{flag}")


if __name__ == "__main__":
    main()
