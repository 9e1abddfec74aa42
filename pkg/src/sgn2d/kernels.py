"""Kernel dispatch: compiled Cython loops when available, numpy otherwise.

Set SGN2D_PURE_PYTHON=1 in the environment to force the numpy fallback
(used by the benchmark and the equivalence tests).
"""

import os

if os.environ.get("SGN2D_PURE_PYTHON"):
    from sgn2d import _fallback as _impl
else:
    try:
        from sgn2d import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from sgn2d import _fallback as _impl

sigma_combine = _impl.sigma_combine
scale_pair = _impl.scale_pair
bernoulli_head = _impl.bernoulli_head
rk4_combine = _impl.rk4_combine
krasny_zero = _impl.krasny_zero


def using_compiled_kernels() -> bool:
    return bool(getattr(_impl, "COMPILED", False))
