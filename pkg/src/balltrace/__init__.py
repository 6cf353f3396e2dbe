"""balltrace: verification toolkit for the sharp Sobolev trace, Beckner,
and Lebedev-Milin inequalities of orders 2, 4, 6, 8 on the unit ball and
upper half-space."""

from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
