"""Backend selection and exact integer scaling for the hot kernels.

Two interchangeable implementations exist: ``gibbscut._kernel`` (Cython,
int64) and ``gibbscut._kernel_py`` (pure Python, unbounded ints).  The
compiled one is used when it imported successfully, the environment does
not set ``GIBBSCUT_PURE=1``, and the values at hand provably fit in int64;
otherwise every call silently takes the exact pure path.  Results are
bit-identical across lanes.

All call sites work in exact rationals; :func:`scale_to_integers` clears
denominators (LCM) before a kernel call and callers divide the scale back
out afterwards.
"""

from __future__ import annotations

import os
from array import array
from fractions import Fraction
from math import lcm

from . import _kernel_py as _pure

if os.environ.get("GIBBSCUT_PURE", "") not in ("", "0"):
    _fast = None
else:
    try:
        from . import _kernel as _fast  # type: ignore[attr-defined]
    except ImportError:
        _fast = None

HAVE_COMPILED = _fast is not None
BACKEND = "compiled" if HAVE_COMPILED else "pure"

# headroom below 2^63 so that sums of two table entries cannot overflow
INT64_SAFE = 1 << 61


def scale_to_integers(values: list[Fraction]) -> tuple[list[int], int]:
    """Clear denominators: returns (integers, scale) with value = int/scale."""
    scale = lcm(*(v.denominator for v in values)) if values else 1
    return [int(v * scale) for v in values], scale


def _table_bound(constant: int, coefs: list[int]) -> int:
    return abs(constant) + sum(abs(c) for c in coefs)


def _fits_table(n: int, constant: int, coefs: list[int]) -> bool:
    return n <= 28 and _table_bound(constant, coefs) <= INT64_SAFE


def table_values(n: int, constant: int, masks: list[int], coefs: list[int]) -> list[int]:
    """Full 2^n value table (mostly for tests; prefer the scan wrappers)."""
    if _fast is not None and _fits_table(n, constant, coefs):
        out = _fast.value_table(n, constant, array("q", masks), array("q", coefs))
        return list(out)
    return _pure.value_table(n, constant, masks, coefs)


def minimize_table(n: int, constant: int, masks: list[int], coefs: list[int]):
    """(min, first argmin, last argmin, AND of argmins, OR of argmins)."""
    if _fast is not None and _fits_table(n, constant, coefs):
        table = _fast.value_table(n, constant, array("q", masks), array("q", coefs))
        return _fast.min_scan(table)
    table = _pure.value_table(n, constant, masks, coefs)
    return _pure.min_scan(table)


def maximize_table(n: int, constant: int, masks: list[int], coefs: list[int]):
    """(max value, first argmax)."""
    if _fast is not None and _fits_table(n, constant, coefs):
        table = _fast.value_table(n, constant, array("q", masks), array("q", coefs))
        return _fast.max_scan(table)
    table = _pure.value_table(n, constant, masks, coefs)
    return _pure.max_scan(table)


def is_submodular_table(n: int, constant: int, masks: list[int], coefs: list[int]):
    """Definitional all-pairs check; (ok, x, y) with the first violating pair."""
    if _fast is not None and _fits_table(n, constant, coefs):
        table = _fast.value_table(n, constant, array("q", masks), array("q", coefs))
        return _fast.check_submodular_table(table, n)
    table = _pure.value_table(n, constant, masks, coefs)
    return _pure.check_submodular_table(table, n)


def solve_max_flow(n_nodes: int, s: int, t: int, arcs: list[tuple[int, int, int]]):
    """Exact max-flow on integer capacities; (value, min_side, max_side).

    The cut sides are 0/1 lists over nodes: the inclusion-minimal and
    inclusion-maximal minimum-cut source sides.
    """
    if s == t or not 0 <= s < n_nodes or not 0 <= t < n_nodes:
        raise ValueError("source and sink must be distinct valid nodes")
    us, vs, caps = [], [], []
    total = 0
    for u, v, c in arcs:
        if c < 0:
            raise ValueError(f"negative capacity on arc {u}->{v}")
        if u == v:
            raise ValueError(f"self-arc at node {u}")
        us.append(u)
        vs.append(v)
        caps.append(c)
        total += c
    if _fast is not None and total <= INT64_SAFE:
        return _fast.max_flow(n_nodes, s, t, array("q", us), array("q", vs), array("q", caps))
    return _pure.max_flow(n_nodes, s, t, us, vs, caps)
