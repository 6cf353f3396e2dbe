"""Kernel backend selection: compiled Cython extension when available,
numpy fallback otherwise.  ``BACKEND`` records which one is active."""

try:
    from . import _fast as _impl

    BACKEND = "compiled"
except ImportError:  # extension not built on this platform
    from . import _purepy as _impl

    BACKEND = "python"

hyp2f1 = _impl.hyp2f1
hyp2f1_dd = _impl.hyp2f1_dd
gegenbauer_table = _impl.gegenbauer_table
zonal_eval = _impl.zonal_eval

__all__ = ["BACKEND", "hyp2f1", "hyp2f1_dd", "gegenbauer_table", "zonal_eval"]
