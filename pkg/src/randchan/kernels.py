"""Kernel selection: compiled extension when available, numpy otherwise.

Set ``RANDCHAN_PURE_PYTHON=1`` to force the fallback.
"""
import os

BACKEND = "python"
if os.environ.get("RANDCHAN_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._ckernels import pair_histogram  # noqa: F401
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        pass
if BACKEND == "python":
    from ._pykernels import pair_histogram  # noqa: F401,F811

__all__ = ["BACKEND", "pair_histogram"]
