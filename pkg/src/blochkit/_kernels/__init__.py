"""Hot-loop kernels with import-time backend selection.

The compiled Cython core is preferred; the vectorized numpy fallback implements
the same contract (same objective, same simplex-descent branch logic).  Set
``BLOCHKIT_PURE=1`` to force the fallback, e.g. for benchmarking.

Both backends expose:

* ``pointwise_batch(zeros, lam, pts, f_kind, barrier_radius)`` -> float array,
  the objective |f'(B(z))| * |B'(z)| * (1 - |z|^2), or -1.0 outside the barrier;
* ``refine_starts(zeros, lam, starts, scales, f_kind, max_iter, ftol,
  barrier_radius)`` -> (values, points, iterations), one Nelder-Mead pass per
  start.

``f_kind``: 0 = identity, 1 = w/(1-w), 2 = w + w^2/2 (the analytic catalog).
"""

import os

if os.environ.get("BLOCHKIT_PURE"):
    from . import _fallback as impl

    BACKEND = "python"
else:
    try:
        from . import _core as impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build environment
        from . import _fallback as impl

        BACKEND = "python"

pointwise_batch = impl.pointwise_batch
refine_starts = impl.refine_starts
