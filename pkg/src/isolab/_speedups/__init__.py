"""Backend selection for the Z_q arithmetic kernels.

Prefers the compiled extension when it built; falls back to the pure
Python twin otherwise.  Set ISOLAB_PURE=1 to force the fallback (useful
for benchmarking and for debugging kernel parity).
"""

import os

if os.environ.get("ISOLAB_PURE") == "1":
    from . import zqcore_py as kernel
else:
    try:
        from . import _zqcore as kernel  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on build environment
        from . import zqcore_py as kernel

BACKEND = kernel.BACKEND
zq_mul = kernel.zq_mul
zq_add = kernel.zq_add
zq_sub = kernel.zq_sub
zq_scal = kernel.zq_scal
zq_mat_mul = kernel.zq_mat_mul
zq_mat_vec = kernel.zq_mat_vec
zq_vec_dot = kernel.zq_vec_dot
