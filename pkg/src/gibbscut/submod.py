"""Submodularity tests, the sufficient gadget class, and exhaustive minimization.

Three views of submodularity are implemented:

* the lattice definition f(x&y) + f(x|y) <= f(x) + f(y), checked over all
  pairs of assignments (the oracle; exponential, capped);
* the pair-residual criterion: P is submodular iff for every variable pair
  (i, j) the residual polynomial P_ij (monomials containing both, with both
  removed) is nonpositive on every context assignment;
* the sufficient coefficient test for graph representability: for every
  pair, the quadratic coefficient plus the positive higher-order
  coefficients sharing that pair must not exceed zero.

The brute-force minimizer doubles as the oracle for every other solver in
the package.  It reports the coordinatewise-minimal and -maximal minimizers,
which for submodular inputs are themselves minimizers (checked, not
assumed).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from . import kernels
from .errors import CapExceededError, PolynomialError
from .poly import Polynomial, fix_variables, restrict, split_boundary, to_masks

DEFAULT_BRUTE_CAP = 14
DEFAULT_PAIR_CONTEXT_CAP = 20


def resolve_brute_cap(cap: int | None = None) -> int:
    """Explicit cap, else GIBBSCUT_BRUTE_CAP from the environment, else 14."""
    if cap is not None:
        return cap
    env = os.environ.get("GIBBSCUT_BRUTE_CAP", "")
    return int(env) if env else DEFAULT_BRUTE_CAP


@dataclass(frozen=True)
class MinimizerReport:
    """Minimum value plus the extreme minimizers over ``vars``.

    ``minimal``/``maximal`` are bit tuples aligned with ``vars``.  When
    ``lattice`` is true they are the coordinatewise AND/OR of the whole
    minimizer set and are minimizers themselves; otherwise (nonsubmodular
    input) they are just witness minimizers.
    """

    min_value: Fraction
    vars: tuple[int, ...]
    minimal: tuple[int, ...]
    maximal: tuple[int, ...]
    lattice: bool

    def minimal_map(self) -> dict[int, int]:
        return dict(zip(self.vars, self.minimal))

    def maximal_map(self) -> dict[int, int]:
        return dict(zip(self.vars, self.maximal))


@dataclass(frozen=True)
class Violation:
    """Pair (i, j) whose residual polynomial is positive at ``context``."""

    i: int
    j: int
    context: dict[int, int]
    value: Fraction


@dataclass(frozen=True)
class SubmodularityWitness:
    verdict: bool
    violation: Violation | None = None


@dataclass(frozen=True)
class PairLedgerEntry:
    """Bookkeeping for one interacting pair in the sufficiency test.

    ``corrected_ok`` is quad_coef + positive_higher <= 0 (the condition the
    gadget compensation actually needs); ``literal_ok`` is the same with the
    quadratic coefficient negated, recorded so the two readings stay visible.
    """

    i: int
    j: int
    quad_coef: Fraction
    positive_higher: Fraction
    corrected_ok: bool
    literal_ok: bool


@dataclass(frozen=True)
class PsufReport:
    """Outcome of the sufficiency test plus the per-pair ledger.

    ``strict_quadratics`` records whether every interacting pair carries a
    strictly negative quadratic coefficient; the test itself only needs
    nonpositivity after compensation.
    """

    verdict: bool
    pairs: tuple[PairLedgerEntry, ...]
    violating_pair: tuple[int, int] | None
    f_minus: bool
    f_plus: bool
    literal_verdict: bool
    strict_quadratics: bool


def _scaled_masks(p: Polynomial) -> tuple[int, list[int], list[int], int]:
    masks, coefs = to_masks(p)
    ints, scale = kernels.scale_to_integers([p.constant] + coefs)
    return ints[0], masks, ints[1:], scale


def is_submodular_def(p: Polynomial, cap: int | None = None) -> bool:
    """Literal lattice-definition check over all assignment pairs (capped)."""
    limit = resolve_brute_cap(cap)
    if p.n_vars > limit:
        raise CapExceededError(f"definitional check needs n <= {limit}, got {p.n_vars}")
    const, masks, coefs, _ = _scaled_masks(p)
    ok, _, _ = kernels.is_submodular_table(p.n_vars, const, masks, coefs)
    return ok


def _pair_residuals(p: Polynomial) -> dict[tuple[int, int], tuple[Fraction, dict[tuple[int, ...], Fraction]]]:
    """For every interacting pair: the constant and monomials of P_ij.

    P_ij collects the monomials containing both i and j with the pair
    removed.  Built in one pass over the monomials, so the total cost is
    linear in the polynomial size times the squared monomial degree.
    """
    out: dict[tuple[int, int], tuple[Fraction, dict[tuple[int, ...], Fraction]]] = {}
    for vars_, coef in p.monomials.items():
        for i, j in combinations(vars_, 2):
            const, residual = out.setdefault((i, j), (Fraction(0), {}))
            rest = tuple(v for v in vars_ if v != i and v != j)
            if not rest:
                out[(i, j)] = (const + coef, residual)
                continue
            c = residual.get(rest, Fraction(0)) + coef
            if c:
                residual[rest] = c
            else:
                residual.pop(rest, None)
    return out


def is_submodular_pairwise(p: Polynomial, context_cap: int | None = None) -> SubmodularityWitness:
    """Pair-residual criterion: submodular iff every P_ij <= 0 everywhere.

    Exhaustive only over the variables that co-occur with each pair, so the
    cost is exponential in the local interaction width, not in n.
    """
    ccap = DEFAULT_PAIR_CONTEXT_CAP if context_cap is None else context_cap
    residuals = _pair_residuals(p)
    for (i, j) in sorted(residuals):
        const, residual = residuals[(i, j)]
        support = sorted({v for vars_ in residual for v in vars_})
        if len(support) > ccap:
            raise CapExceededError(
                f"pair ({i},{j}) context has {len(support)} variables (cap {ccap})"
            )
        if not support:
            if const > 0:
                return SubmodularityWitness(False, Violation(i, j, {}, const))
            continue
        sub = Polynomial(p.n_vars, const, residual)
        local = restrict(sub, support)
        lconst, lmasks, lcoefs, scale = _scaled_masks(local)
        vmax, argmax = kernels.maximize_table(len(support), lconst, lmasks, lcoefs)
        if vmax > 0:
            context = {v: 0 for v in range(p.n_vars) if v != i and v != j}
            for k, v in enumerate(support):
                context[v] = (argmax >> k) & 1
            return SubmodularityWitness(False, Violation(i, j, context, Fraction(vmax, scale)))
    return SubmodularityWitness(True, None)


def in_p_suf(p: Polynomial) -> PsufReport:
    """Sufficient condition for gadget-based graph representability.

    For every interacting pair: quadratic coefficient + sum of positive
    degree >= 3 coefficients containing the pair must be <= 0.  True implies
    submodular.  Also classifies the two easy subclasses: all nonlinear
    coefficients nonpositive, and all degree >= 3 coefficients nonnegative.
    """
    pos_cover: dict[tuple[int, int], Fraction] = {}
    all_pairs: set[tuple[int, int]] = set()
    for vars_, coef in p.monomials.items():
        for pair in combinations(vars_, 2):
            all_pairs.add(pair)
            if len(vars_) >= 3 and coef > 0:
                pos_cover[pair] = pos_cover.get(pair, Fraction(0)) + coef
    entries: list[PairLedgerEntry] = []
    verdict = True
    literal = True
    violating: tuple[int, int] | None = None
    for i, j in sorted(all_pairs):
        a = p.monomials.get((i, j), Fraction(0))
        pos = pos_cover.get((i, j), Fraction(0))
        ok = a + pos <= 0
        lit = -a + pos <= 0
        entries.append(PairLedgerEntry(i, j, a, pos, ok, lit))
        if not ok and verdict:
            verdict = False
            violating = (i, j)
        literal = literal and lit
    f_minus = all(c <= 0 for vars_, c in p.monomials.items() if len(vars_) >= 2)
    f_plus = verdict and all(c >= 0 for vars_, c in p.monomials.items() if len(vars_) >= 3)
    strict = all(e.quad_coef < 0 for e in entries)
    return PsufReport(verdict, tuple(entries), violating, f_minus, f_plus, literal, strict)


def brute_minimize(p: Polynomial, cap: int | None = None) -> MinimizerReport:
    """Exhaustive exact minimum with extreme minimizers (the oracle solver)."""
    limit = resolve_brute_cap(cap)
    if p.n_vars > limit:
        raise CapExceededError(f"brute force needs n <= {limit}, got {p.n_vars}")
    if p.n_vars == 0:
        return MinimizerReport(p.constant, (), (), (), True)
    const, masks, coefs, scale = _scaled_masks(p)
    vmin, first, last, and_mask, or_mask = kernels.minimize_table(p.n_vars, const, masks, coefs)
    min_value = Fraction(vmin, scale)
    order = tuple(range(p.n_vars))

    def bits(mask: int) -> tuple[int, ...]:
        return tuple((mask >> v) & 1 for v in order)

    lattice = True
    minimal = bits(and_mask)
    if p.evaluate(minimal) != min_value:
        lattice = False
        minimal = bits(first)
    maximal = bits(or_mask)
    if p.evaluate(maximal) != min_value:
        lattice = False
        maximal = bits(last)
    return MinimizerReport(min_value, order, minimal, maximal, lattice)


def boundary_minimize(
    p: Polynomial,
    block: Iterable[int],
    boundary: Mapping[int, int],
    cap: int | None = None,
) -> MinimizerReport:
    """Minimize the block part of P under a fixed boundary assignment.

    Only the monomials touching ``block`` count (the remainder of P does not
    depend on the block), so the reported minimum is the block polynomial's,
    evaluated with ``boundary`` substituted for every variable outside.
    """
    dset = sorted(set(block))
    expected = set(range(p.n_vars)) - set(dset)
    if set(boundary) != expected:
        missing = expected - set(boundary)
        extra = set(boundary) - expected
        raise PolynomialError(f"boundary must fix exactly the complement (missing {sorted(missing)}, extra {sorted(extra)})")
    touching, _ = split_boundary(p, dset)
    residual = fix_variables(touching, boundary)
    local = restrict(residual, dset)
    rep = brute_minimize(local, cap)
    return MinimizerReport(rep.min_value, tuple(dset), rep.minimal, rep.maximal, rep.lattice)
