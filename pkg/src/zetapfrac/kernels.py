"""Double precision kernel selection.

The compiled ``_ckernels`` extension is used when importable; otherwise the
pure-Python ``_pykernels`` fallback. ``ZETAPFRAC_PURE=1`` forces the fallback.
``BACKEND`` names the active implementation.
"""

import os

from . import _pykernels

if os.environ.get("ZETAPFRAC_PURE") == "1":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

zeta_d = _impl.zeta_d
loggamma_d = _impl.loggamma_d
theta_d = _impl.theta_d
hardy_z = _impl.hardy_z
zeta_line = _impl.zeta_line
cosine_series = _impl.cosine_series


def get_backend(name=None):
    """Return the kernel module for ``name`` ("cython", "python") or the active one."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")
