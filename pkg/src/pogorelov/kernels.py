"""Kernel backend selection.

Two interchangeable backends evaluate the hot numerical paths: the compiled
extension pogorelov._kernels when it is importable, else the pure numpy
mirror pogorelov._kernels_py. Both produce bit-identical output. Set
POGORELOV_KERNELS=python or =compiled to force one side (the latter raises
at import if the extension is missing).
"""
import os

import numpy as np

from . import _kernels_py

_compiled = None
try:
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

_force = os.environ.get("POGORELOV_KERNELS", "").strip().lower()
if _force in ("python", "py"):
    _impl = _kernels_py
elif _force == "compiled":
    if _compiled is None:
        raise ImportError(
            "POGORELOV_KERNELS=compiled but the pogorelov._kernels extension "
            "is not built; reinstall with a C toolchain or unset the variable")
    _impl = _compiled
elif _force:
    raise ValueError(f"POGORELOV_KERNELS={_force!r}: expected 'python' or 'compiled'")
else:
    _impl = _compiled if _compiled is not None else _kernels_py


def get_backend() -> str:
    """Name of the active backend: 'compiled' or 'python'."""
    return _impl.BACKEND


def available_backends() -> dict:
    """Importable backends by name, for benchmarks and parity tests."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out


def _flat(arr):
    a = np.ascontiguousarray(arr, dtype=np.float64)
    return a.reshape(-1), a.shape


def profile_eval(rho, a, k, impl=None):
    """k-th derivative (k in 0..3) of the radial profile; any input shape."""
    impl = impl or _impl
    flat, shape = _flat(rho)
    return impl.profile_eval(flat, float(a), int(k)).reshape(shape)


def deviation_eval(rho, a, impl=None):
    """(d, d', d'', d''') of the bump deviation d = f - rho; any input shape."""
    impl = impl or _impl
    flat, shape = _flat(rho)
    return tuple(arr.reshape(shape) for arr in impl.deviation_eval(flat, float(a)))


def metric_scalars(rho, a, impl=None):
    """(w-1, w', w'', m, m', m'') radial coefficients; any input shape."""
    impl = impl or _impl
    flat, shape = _flat(rho)
    return tuple(arr.reshape(shape) for arr in impl.metric_scalars(flat, float(a)))


def metric_tensors(x, y, a, impl=None):
    """Compact metric deviation tensors (n,3), (n,6), (n,9); any input shape.

    Output shapes are the input shape plus the trailing component axis.
    """
    impl = impl or _impl
    fx, shape = _flat(x)
    fy, yshape = _flat(y)
    if yshape != shape:
        raise ValueError("x and y must have the same shape")
    H, D1, D2 = impl.metric_tensors(fx, fy, float(a))
    return (H.reshape(shape + (3,)), D1.reshape(shape + (6,)),
            D2.reshape(shape + (9,)))
