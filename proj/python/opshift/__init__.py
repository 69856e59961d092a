"""Operator derivatives, multiple operator integrals, and higher-order
spectral shift functions for contraction pairs (C++ core bindings)."""

try:
    from ._opshift import *  # noqa: F401,F403  (installed package layout)
    from . import _opshift as _core  # noqa: F401
except ImportError:  # build-tree layout: module sits next to the package dir
    from _opshift import *  # noqa: F401,F403
    import _opshift as _core  # noqa: F401

__all__ = [name for name in dir(_core) if not name.startswith("_")]
