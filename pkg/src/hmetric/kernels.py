"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the pure-Python
reference runs. Setting ``HMETRIC_PURE_PYTHON=1`` forces the reference, and
``use_backend`` switches at runtime (tests and the benchmark rely on it).
"""

import os

import numpy as np

from . import _kernels_py as _py

try:
    from . import _ckernels as _c
except ImportError:  # pragma: no cover - depends on the build
    _c = None

MASK_BITS = 64

_backend = None


def available():
    """Names of the usable backends."""
    return ["python"] + (["compiled"] if _c is not None else [])


def use_backend(name):
    global _backend
    if name == "compiled" and _c is None:
        raise RuntimeError("compiled kernels are not built")
    if name not in ("python", "compiled"):
        raise ValueError(f"unknown backend {name!r}")
    _backend = name


def backend():
    return _backend


def _i32(a):
    return np.ascontiguousarray(a, dtype=np.int32)


def _u64(a):
    return np.ascontiguousarray(np.array(a, dtype=object).astype(np.uint64))


def _compiled():
    return _backend == "compiled"


def subword_leq(u, v, above=None):
    if _compiled():
        return _c.subword_leq(u, v, above)
    return _py.subword_leq(u, v, above)


def triangle_violation(dist, oplus, leq):
    if _compiled():
        return _c.triangle_violation(_i32(dist), _i32(oplus), _i32(leq))
    return _py.triangle_violation(dist, oplus, leq)


def enum_forms(dist, oplus, leq, inv, strong, limit):
    if _compiled():
        return _c.enum_forms(_i32(dist), _i32(oplus), _i32(leq), _i32(inv), bool(strong), int(limit))
    return _py.enum_forms(dist, oplus, leq, inv, strong, limit)


def minimal_rows(rows, leq):
    if not len(rows):
        return []
    if _compiled():
        return _c.minimal_rows(_i32(rows), _i32(leq))
    return _py.minimal_rows(rows, leq)


def enum_maps(src, dst, leq, fixed, limit):
    if _compiled():
        return _c.enum_maps(_i32(src), _i32(dst), _i32(leq), _i32(fixed), int(limit))
    return _py.enum_maps(src, dst, leq, fixed, limit)


def helly2_violation(masks, n, anchors=None):
    if _compiled() and n <= MASK_BITS:
        return _c.helly2_violation(_u64(masks), n, anchors)
    return _py.helly2_violation(masks, n, anchors)


def commuting_check(maps):
    if _compiled() and len(maps) and len(maps[0]) <= MASK_BITS:
        return _c.commuting_check(_i32(maps))
    return _py.commuting_check(maps)


def enum_holes(balls, n):
    if _compiled() and n <= MASK_BITS:
        return _c.enum_holes(_u64(balls).reshape(len(balls), -1), n)
    return _py.enum_holes(balls, n)


def preserves_holes(holes, fmap, meet, balls, one, n):
    if not len(holes):
        return -1
    if _compiled() and n <= MASK_BITS:
        return _c.preserves_holes(_i32(holes), _i32(fmap), _i32(meet),
                                  _u64(balls).reshape(len(balls), -1), int(one), n)
    return _py.preserves_holes(holes, fmap, meet, balls, one, n)


use_backend("python" if _c is None or os.environ.get("HMETRIC_PURE_PYTHON") == "1" else "compiled")
