"""Time the compiled kernels against the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat R]``.
"""

import argparse
import timeit

import numpy as np

from llzeta import _kernels
from llzeta.contour import eval_zeta_k
from llzeta.series import PeriodicParams, eval_er_series
from llzeta.seqspace import PowerTail, TruncatedSeq, WeightFamily


def cases():
    rng = np.random.default_rng(0)
    n = 200_000
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    logz = -np.log(np.arange(1, n + 1)) + 0j
    lam = 0.5 * np.exp(1j * np.linspace(-np.pi, np.pi, 4096))
    loglam = np.log(lam)
    w = np.full(lam.size, 1e-3 + 0j)
    a = np.array([0.3 + 0.1j, 0.7])
    z = np.array([0.2, 0.0 + 0j])
    base = rng.standard_normal(2000) + 0j
    ratio = 0.3 * rng.random(2000) + 0j
    bseq = TruncatedSeq.from_tail(PowerTail(1.0), 50, WeightFamily.ones())
    zseq = TruncatedSeq.from_tail(PowerTail(1.0, 1.0), 50)
    p = PeriodicParams(2, [0.3 + 0.1j, 0.7], [0.2, 0.0])
    return {
        "power_sum n=2e5": lambda: _kernels.power_sum(b, logz, 2.5 + 1j),
        "lerch_sum n=1e6": lambda: _kernels.lerch_sum(a, z, 2, 1.7 + 0.5j, 1, 1_000_001),
        "powexp_sum n=1e6": lambda: _kernels.powexp_sum(1.0, 0.25, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 2.5, 1, 1_000_001),
        "hankel_sum m=4096": lambda: _kernels.hankel_sum(lam, loglam, w, -1.3 + 2j, 1.2, 0.4j, 2, False),
        "taylor_moments 2000x200": lambda: _kernels.taylor_moments(base, ratio, 200),
        "eval_er_series tol=1e-6": lambda: eval_er_series(bseq, zseq, 2.0, 1e-6),
        "eval_zeta_k contour s=-2.5+3i": lambda: eval_zeta_k(p, -2.5 + 3j, tol=1e-10),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        from llzeta import _ckernels  # noqa: F401
        backends = ("cython", "python")
    except ImportError:
        backends = ("python",)
        print("compiled extension not built; timing the numpy fallback only")
    prev = _kernels.BACKEND
    rows = []
    for name, fn in cases().items():
        times = {}
        for be in backends:
            _kernels.use_backend(be)
            fn()
            times[be] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        rows.append((name, times))
    _kernels.use_backend(prev)
    print(f"{'case':34s}" + "".join(f"{be:>12s}" for be in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, t in rows:
        line = f"{name:34s}" + "".join(f"{t[be] * 1e3:10.2f}ms" for be in backends)
        if len(backends) == 2:
            line += f"{t['python'] / t['cython']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
