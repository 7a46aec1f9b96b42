"""Modified submodular-function minimization by block decomposition (MSFM).

For a submodular polynomial, solving one variable block under the two
extreme boundary assignments pins part of the global solution: a zero in the
maximal minimizer of the all-ones boundary problem forces that coordinate to
zero in every global minimizer (its maximal boundary dominates every true
boundary), and dually a one in the minimal minimizer under the all-zeros
boundary forces a one.  The algorithm partitions the free variables, fixes
whatever those two solves agree on, substitutes, and repeats for a few
levels; whatever remains is handed to a base solver (graph cut when the
residual is in the gadget class, brute force otherwise).

Fixed coordinates agree with every global minimizer, so the assembled answer
is exact, and the residual's extreme minimizers extend to the global ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import CapExceededError, MsfmError, VerificationError
from .graphcut import minimize_via_cut
from .poly import Polynomial, fix_variables, restrict
from .submod import (
    MinimizerReport,
    brute_minimize,
    in_p_suf,
    is_submodular_pairwise,
    resolve_brute_cap,
)


@dataclass(frozen=True)
class PartitionPlan:
    """Disjoint variable blocks covering the free set."""

    blocks: tuple[tuple[int, ...], ...]
    strategy: str

    def __post_init__(self):
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise MsfmError("empty block in partition")
            overlap = seen.intersection(block)
            if overlap:
                raise MsfmError(f"blocks overlap on {sorted(overlap)}")
            seen.update(block)


def make_partition(
    free_vars: Iterable[int],
    strategy: str = "chunks",
    size: int | tuple[int, int] = 8,
    grid: tuple[int, int, int] | None = None,
) -> PartitionPlan:
    """Partition the free variables into solver blocks.

    ``chunks`` splits the sorted free list into consecutive runs of ``size``.
    ``grid`` groups the level variables of rectangular site tiles; ``size``
    is then (tile_w, tile_h) and ``grid`` the (width, height, k) geometry.
    """
    free = sorted(set(free_vars))
    if not free:
        raise MsfmError("cannot partition an empty free set")
    if strategy == "chunks":
        if not isinstance(size, int) or size < 1:
            raise MsfmError("chunk strategy needs an integer size >= 1")
        blocks = tuple(
            tuple(free[i : i + size]) for i in range(0, len(free), size)
        )
        return PartitionPlan(blocks, "chunks")
    if strategy == "grid":
        if grid is None:
            raise MsfmError("grid strategy needs (width, height, k)")
        width, height, k = grid
        if isinstance(size, int):
            tile_w = tile_h = size
        else:
            tile_w, tile_h = size
        if tile_w < 1 or tile_h < 1:
            raise MsfmError("tile sides must be >= 1")
        free_set = set(free)
        blocks = []
        for ty in range(0, height, tile_h):
            for tx in range(0, width, tile_w):
                block = []
                for y in range(ty, min(ty + tile_h, height)):
                    for x in range(tx, min(tx + tile_w, width)):
                        site = y * width + x
                        for level in range(k):
                            var = site * k + level
                            if var in free_set:
                                block.append(var)
                if block:
                    blocks.append(tuple(block))
        covered = {v for b in blocks for v in b}
        if covered != free_set:
            raise MsfmError("grid geometry does not cover the free variables")
        return PartitionPlan(tuple(blocks), "grid")
    raise MsfmError(f"unknown partition strategy {strategy!r}")


@dataclass(frozen=True)
class MsfmConfig:
    """Solver knobs: level count, partition shape, base-solver cap.

    The base solver for each block (and for the final residual) is the graph
    cut when the subproblem passes the sufficiency test, otherwise brute
    force within the cap.
    """

    levels: int = 3
    strategy: str = "chunks"
    block_size: int | tuple[int, int] = 8
    grid: tuple[int, int, int] | None = None
    brute_cap: int | None = None
    check_submodular: bool = True

    def __post_init__(self):
        if self.levels < 1:
            raise MsfmError("need at least one level")


@dataclass(frozen=True)
class LevelTraceEntry:
    """What one level did: its blocks and the coordinates they pinned."""

    level: int
    blocks: tuple[tuple[int, ...], ...]
    fixed_zero: tuple[tuple[int, ...], ...]
    fixed_one: tuple[tuple[int, ...], ...]
    cumulative_fixed: tuple[int, ...]
    fallback: bool


@dataclass(frozen=True)
class MsfmTrace:
    entries: tuple[LevelTraceEntry, ...]
    fallback: bool
    residual_vars: tuple[int, ...]


def trace_to_json_dict(trace: MsfmTrace) -> dict:
    return {
        "fallback": trace.fallback,
        "residual_vars": list(trace.residual_vars),
        "levels": [
            {
                "level": e.level,
                "blocks": [list(b) for b in e.blocks],
                "fixed_zero": [list(b) for b in e.fixed_zero],
                "fixed_one": [list(b) for b in e.fixed_one],
                "cumulative_fixed": list(e.cumulative_fixed),
                "fallback": e.fallback,
            }
            for e in trace.entries
        ],
    }


def _monomials_by_var(p: Polynomial) -> dict[int, list[tuple[int, ...]]]:
    index: dict[int, list[tuple[int, ...]]] = {}
    for vars_ in p.monomials:
        for v in vars_:
            index.setdefault(v, []).append(vars_)
    return index


def _block_polynomial(
    p: Polynomial,
    block: tuple[int, ...],
    fixed: Mapping[int, int],
    boundary_bit: int,
    index: dict[int, list[tuple[int, ...]]],
) -> Polynomial:
    """Restriction of the block part of P under a constant boundary.

    Monomials touching the block keep their block variables; every other
    variable contributes its fixed value, or ``boundary_bit`` if still free.
    Returns a dense polynomial over the block (position i = block[i]).
    """
    bset = set(block)
    pos = {v: i for i, v in enumerate(block)}
    candidates: set[tuple[int, ...]] = set()
    for v in block:
        candidates.update(index.get(v, ()))
    merged: dict[tuple[int, ...], Fraction] = {}
    for vars_ in candidates:
        coef = p.monomials[vars_]
        key = []
        dead = False
        for v in vars_:
            if v in bset:
                key.append(pos[v])
            elif (fixed.get(v, boundary_bit)) == 0:
                dead = True
                break
        if dead:
            continue
        tkey = tuple(sorted(key))
        c = merged.get(tkey, Fraction(0)) + coef
        if c:
            merged[tkey] = c
        else:
            merged.pop(tkey, None)
    return Polynomial(len(block), Fraction(0), merged)


def _solve_dense(q: Polynomial, cap: int | None) -> MinimizerReport:
    """Base solver dispatch: graph cut if representable, else brute force."""
    if in_p_suf(q).verdict:
        return minimize_via_cut(q)
    limit = resolve_brute_cap(cap)
    if q.n_vars <= limit:
        return brute_minimize(q, limit)
    raise MsfmError(
        f"subproblem of {q.n_vars} variables is outside the gadget class "
        f"and beyond the brute cap {limit}"
    )


def level_pass(
    p: Polynomial,
    plan: PartitionPlan,
    fixed: Mapping[int, int],
    cap: int | None = None,
    level: int = 1,
) -> tuple[dict[int, int], LevelTraceEntry]:
    """One sweep over the blocks: solve extreme boundaries, pin agreements.

    For each block, the maximal minimizer under the all-ones boundary and
    the minimal minimizer under the all-zeros boundary sandwich the true
    restriction of any global minimizer; coordinates where the sandwich is
    tight get fixed.
    """
    index = _monomials_by_var(p)
    newly: dict[int, int] = {}
    zeros: list[tuple[int, ...]] = []
    ones: list[tuple[int, ...]] = []
    for block in plan.blocks:
        if any(v in fixed for v in block):
            raise MsfmError("partition block contains already-fixed variables")
        hi = _solve_dense(_block_polynomial(p, block, fixed, 1, index), cap)
        lo = _solve_dense(_block_polynomial(p, block, fixed, 0, index), cap)
        x_hi = hi.maximal
        x_lo = lo.minimal
        if any(a > b for a, b in zip(x_lo, x_hi)):
            raise MsfmError(
                "extreme block solutions are not sandwiched; input is likely "
                "not submodular"
            )
        block_zeros = tuple(v for v, bit in zip(block, x_hi) if bit == 0)
        block_ones = tuple(v for v, bit in zip(block, x_lo) if bit == 1)
        zeros.append(block_zeros)
        ones.append(block_ones)
        for v in block_zeros:
            newly[v] = 0
        for v in block_ones:
            newly[v] = 1
    cumulative = tuple(sorted(set(fixed) | set(newly)))
    entry = LevelTraceEntry(
        level=level,
        blocks=plan.blocks,
        fixed_zero=tuple(zeros),
        fixed_one=tuple(ones),
        cumulative_fixed=cumulative,
        fallback=not newly,
    )
    return newly, entry


def msfm_minimize(
    p: Polynomial, cfg: MsfmConfig = MsfmConfig()
) -> tuple[MinimizerReport, MsfmTrace]:
    """Exact minimization via level passes plus a base solve of the residual.

    Requires a submodular input (verified through the pair-residual test
    unless ``cfg.check_submodular`` is off).  The returned report carries the
    global minimal and maximal minimizers; the trace records what each level
    fixed and whether a level fell through to the base solver.
    """
    if not p.monomials:
        n = p.n_vars
        report = MinimizerReport(p.constant, tuple(range(n)), (0,) * n, (1,) * n, True)
        return report, MsfmTrace((), False, ())
    if cfg.check_submodular:
        try:
            witness = is_submodular_pairwise(p)
        except CapExceededError as exc:
            raise MsfmError(f"cannot verify submodularity: {exc}") from exc
        if not witness.verdict:
            v = witness.violation
            raise MsfmError(f"input is not submodular (pair ({v.i},{v.j}))")

    fixed: dict[int, int] = {}
    entries: list[LevelTraceEntry] = []
    fell_back = False
    for level in range(1, cfg.levels + 1):
        free = [v for v in range(p.n_vars) if v not in fixed]
        if not free:
            break
        plan = make_partition(free, cfg.strategy, cfg.block_size, cfg.grid)
        newly, entry = level_pass(p, plan, fixed, cfg.brute_cap, level)
        entries.append(entry)
        if not newly:
            fell_back = True
            break
        fixed.update(newly)

    free = tuple(v for v in range(p.n_vars) if v not in fixed)
    if free:
        residual = restrict(fix_variables(p, fixed), free)
        rep = _solve_dense(residual, cfg.brute_cap)
        res_min = dict(zip(free, rep.minimal))
        res_max = dict(zip(free, rep.maximal))
    else:
        res_min = {}
        res_max = {}

    minimal = tuple(fixed.get(v, res_min.get(v)) for v in range(p.n_vars))
    maximal = tuple(fixed.get(v, res_max.get(v)) for v in range(p.n_vars))
    min_value = p.evaluate(minimal)
    if p.evaluate(maximal) != min_value:
        raise VerificationError("extreme assemblies disagree on the minimum value")
    report = MinimizerReport(min_value, tuple(range(p.n_vars)), minimal, maximal, True)
    return report, MsfmTrace(tuple(entries), fell_back, free)
