"""s-t flow networks whose minimum cuts minimize gadget-class polynomials.

Cut model: inner nodes are labeled z_i = 1 on the source side, 0 on the sink
side.  The cost of a cut is then a quadratic polynomial of z:

    cost(z) = sum d(s,i) (1 - z_i) + sum d(i,t) z_i + sum d(i,j) (z_i - z_j) z_i

with all capacities nonnegative.  A polynomial is representable when it
equals min-over-auxiliary-nodes of such a cost plus a constant offset.

Construction rules:

* quadratic pair term a x_i x_j with a <= 0: arc i -> j of capacity -a, and
  a is folded into the linear coefficient of x_i;
* linear term c x_i: arc i -> t of capacity c when c > 0, or arc s -> i of
  capacity -c plus an offset increment c when c < 0;
* monomial a x_1..x_m with a < 0, m >= 3: one auxiliary node z with arcs
  z -> x_i of capacity -a and linear term a z (one-gadget form
  -a sum (z - x_i) z + a z, whose aux minimum is exactly a x_1..x_m);
* monomial a x_1..x_m with a > 0, m >= 3: l auxiliary nodes z_j with arcs
  z_j -> x_i of capacity b_j and linear terms e_j z_j, where for odd m
  (l = (m-1)/2) b = (2a,..,2a,a) and e_j = -(2m-4j+1)a except e_l = -2a, and
  for even m (l = (m-2)/2) b_j = 2a, e_j = -(2m-4j+1)a.  The aux minimum is
  a x_1..x_m - a sum_{i<j} x_i x_j, so the carried quadratic is added back
  to the pair layer; the sufficiency condition guarantees the compensated
  pair coefficients stay nonpositive.

Everything is exact: rational capacities are scaled to integers by their
common denominator before the flow solve and the scale divided back out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from . import kernels
from .errors import NotRepresentableError, PolynomialError, VerificationError
from .poly import Polynomial, make_polynomial
from .submod import MinimizerReport, in_p_suf


@dataclass(frozen=True)
class FlowNetwork:
    """Directed s-t network with exact rational capacities.

    Node 0 is the source, node n_nodes-1 the sink; ``var_nodes`` maps
    polynomial variables to inner nodes and ``aux_nodes`` lists gadget
    nodes.  ``offset`` is the signed constant making cut costs line up with
    polynomial values.
    """

    n_nodes: int
    arcs: tuple[tuple[int, int, Fraction], ...]
    offset: Fraction
    var_nodes: dict[int, int] = field(default_factory=dict)
    aux_nodes: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n_nodes < 2:
            raise PolynomialError("network needs at least source and sink")
        for u, v, c in self.arcs:
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise PolynomialError(f"arc ({u},{v}) out of range")
            if u == v:
                raise PolynomialError(f"self-arc at node {u}")
            if c < 0:
                raise PolynomialError(f"negative capacity on arc ({u},{v})")

    @property
    def s(self) -> int:
        return 0

    @property
    def t(self) -> int:
        return self.n_nodes - 1

    def cut_cost(self, source_side: Iterable[int]) -> Fraction:
        """Total capacity of arcs leaving a source-side node set."""
        side = set(source_side)
        if self.s not in side or self.t in side:
            raise PolynomialError("source side must contain s and exclude t")
        return sum((c for u, v, c in self.arcs if u in side and v not in side), Fraction(0))


@dataclass(frozen=True)
class CutResult:
    cut_value: Fraction
    min_source_side: frozenset[int]
    max_source_side: frozenset[int]


@dataclass(frozen=True)
class Gadget:
    """One monomial's auxiliary-node subnetwork.

    The gadget polynomial is sum_j b_j sum_i (z_j - x_i) z_j + sum_j e_j z_j;
    its minimum over the aux variables equals coef * prod(x) plus the carried
    ``compensation`` quadratics (empty for the negative kind).  ``tight_aux``
    holds, for each Hamming weight of x, an aux vector achieving the minimum.
    """

    kind: str
    vars: tuple[int, ...]
    coef: Fraction
    b: tuple[Fraction, ...]
    e: tuple[Fraction, ...]
    compensation: tuple[tuple[tuple[int, int], Fraction], ...] = ()
    tight_aux: tuple[tuple[int, ...], ...] = ()

    @property
    def aux_count(self) -> int:
        return len(self.b)

    def represented_value(self, x_bits: tuple[int, ...]) -> Fraction:
        """coef * prod(x) + carried quadratics, at bits aligned with vars."""
        value = self.coef if all(x_bits) else Fraction(0)
        pos = {v: k for k, v in enumerate(self.vars)}
        for (i, j), c in self.compensation:
            if x_bits[pos[i]] and x_bits[pos[j]]:
                value += c
        return value

    def polynomial(self, n_vars: int, aux_ids: tuple[int, ...]) -> Polynomial:
        """The gadget polynomial over original + aux variable ids."""
        if len(aux_ids) != self.aux_count:
            raise PolynomialError("aux id count mismatch")
        m = len(self.vars)
        terms = []
        for j, z in enumerate(aux_ids):
            terms.append(([z], m * self.b[j] + self.e[j]))
            for v in self.vars:
                terms.append((sorted((v, z)), -self.b[j]))
        return make_polynomial(terms, constant=0, n_vars=n_vars)


def neg_monomial_gadget(vars_: Iterable[int], a: Fraction) -> Gadget:
    """One aux node representing a negative monomial of degree >= 3 exactly."""
    vs = tuple(sorted(vars_))
    a = Fraction(a)
    m = len(vs)
    if a >= 0:
        raise NotRepresentableError(f"negative-monomial gadget needs a < 0, got {a}")
    if m < 3:
        raise NotRepresentableError("degree-2 monomials go directly into the pair layer")
    tight = tuple((1,) if kappa == m else (0,) for kappa in range(m + 1))
    return Gadget("negative", vs, a, (-a,), (a,), (), tight)


def pos_monomial_gadget(vars_: Iterable[int], a: Fraction) -> Gadget:
    """Aux nodes representing a positive monomial minus its pair compensation."""
    vs = tuple(sorted(vars_))
    a = Fraction(a)
    m = len(vs)
    if a <= 0:
        raise NotRepresentableError(f"positive-monomial gadget needs a > 0, got {a}")
    if m < 3:
        raise NotRepresentableError("positive quadratics are not representable")
    if m % 2:
        l = (m - 1) // 2
        b = tuple([2 * a] * (l - 1) + [a])
        e = tuple([-(2 * m - 4 * j + 1) * a for j in range(1, l)] + [-2 * a])
    else:
        l = (m - 2) // 2
        b = tuple([2 * a] * l)
        e = tuple(-(2 * m - 4 * j + 1) * a for j in range(1, l + 1))
    comp = tuple((pair, -a) for pair in combinations(vs, 2))
    tight = tuple(
        tuple(1 if idx < min(kappa // 2, l) else 0 for idx in range(l))
        for kappa in range(m + 1)
    )
    return Gadget("positive", vs, a, b, e, comp, tight)


def quadratic_to_network(p: Polynomial) -> FlowNetwork:
    """Network whose cut costs equal a submodular quadratic, up to the offset.

    Requires degree <= 2 and every pair coefficient <= 0 (which is exactly
    graph representability for quadratics); a positive pair coefficient is
    reported with the offending pair.
    """
    if p.degree() > 2:
        raise NotRepresentableError(f"expected degree <= 2, got {p.degree()}")
    linear = {v: Fraction(0) for v in range(p.n_vars)}
    arcs: list[tuple[int, int, Fraction]] = []
    offset = p.constant
    node = {v: v + 1 for v in range(p.n_vars)}
    t = p.n_vars + 1
    for vars_, coef in p.terms():
        if len(vars_) == 1:
            linear[vars_[0]] += coef
        else:
            i, j = vars_
            if coef > 0:
                raise NotRepresentableError(
                    f"positive pair coefficient {coef} on ({i},{j})", pair=(i, j)
                )
            arcs.append((node[i], node[j], -coef))
            linear[i] += coef
    for v in range(p.n_vars):
        c = linear[v]
        if c > 0:
            arcs.append((node[v], t, c))
        elif c < 0:
            arcs.append((0, node[v], -c))
            offset += c
    return FlowNetwork(p.n_vars + 2, tuple(arcs), offset, node, ())


def build_network(p: Polynomial) -> FlowNetwork:
    """Gadget construction for any polynomial passing the sufficiency test.

    Degree >= 3 monomials become gadgets, their carried quadratics are added
    back into the pair layer, and the compensated layer (all coefficients
    nonpositive by the sufficiency condition) plus linear terms become arcs.
    Node count is n + total aux + 2.
    """
    report = in_p_suf(p)
    if not report.verdict:
        raise NotRepresentableError(
            f"polynomial fails the sufficiency condition at pair {report.violating_pair}",
            pair=report.violating_pair,
        )
    n = p.n_vars
    pair_coefs: dict[tuple[int, int], Fraction] = {}
    linear = {v: Fraction(0) for v in range(n)}
    gadgets: list[Gadget] = []
    for vars_, coef in p.terms():
        if len(vars_) == 1:
            linear[vars_[0]] += coef
        elif len(vars_) == 2:
            pair_coefs[vars_] = pair_coefs.get(vars_, Fraction(0)) + coef
        elif coef < 0:
            gadgets.append(neg_monomial_gadget(vars_, coef))
        else:
            g = pos_monomial_gadget(vars_, coef)
            gadgets.append(g)
            for pair, carried in g.compensation:
                pair_coefs[pair] = pair_coefs.get(pair, Fraction(0)) - carried

    node = {v: v + 1 for v in range(n)}
    aux_nodes: list[int] = []
    next_node = n + 1
    arcs: list[tuple[int, int, Fraction]] = []
    offset = p.constant

    for (i, j), q in sorted(pair_coefs.items()):
        if q > 0:
            raise VerificationError(
                f"compensated pair coefficient {q} on ({i},{j}) is positive"
            )
        if q:
            arcs.append((node[i], node[j], -q))
            linear[i] += q

    for g in gadgets:
        for j in range(g.aux_count):
            z = next_node
            next_node += 1
            aux_nodes.append(z)
            for v in g.vars:
                arcs.append((z, node[v], g.b[j]))
            # e_j < 0 always: source arc plus offset decrement
            arcs.append((0, z, -g.e[j]))
            offset += g.e[j]

    t = next_node
    for v in range(n):
        c = linear[v]
        if c > 0:
            arcs.append((node[v], t, c))
        elif c < 0:
            arcs.append((0, node[v], -c))
            offset += c
    return FlowNetwork(t + 1, tuple(arcs), offset, node, tuple(aux_nodes))


def max_flow_min_cut(net: FlowNetwork) -> CutResult:
    """Exact max-flow; returns the extreme minimum cuts.

    The minimal source side is the residual forward-reachable set from s,
    the maximal one the complement of the residual backward-reachable set of
    t; both are verified to cost exactly the flow value.
    """
    caps = [c for _, _, c in net.arcs]
    scaled, scale = kernels.scale_to_integers(caps)
    arcs = [(u, v, sc) for (u, v, _), sc in zip(net.arcs, scaled)]
    flow, min_bits, max_bits = kernels.solve_max_flow(net.n_nodes, net.s, net.t, arcs)
    value = Fraction(flow, scale)
    min_side = frozenset(i for i, bit in enumerate(min_bits) if bit)
    max_side = frozenset(i for i, bit in enumerate(max_bits) if bit)
    for side in (min_side, max_side):
        if net.cut_cost(side) != value:
            raise VerificationError("computed cut side does not realize the flow value")
    if not min_side <= max_side:
        raise VerificationError("extreme cut sides are not nested")
    return CutResult(value, min_side, max_side)


def minimize_via_cut(p: Polynomial) -> MinimizerReport:
    """Exact global minimization through the gadget network.

    The minimum value is cut value + offset; the extreme minimizers are the
    projections of the extreme cut sides onto the original variables.
    """
    net = build_network(p)
    res = max_flow_min_cut(net)
    min_value = res.cut_value + net.offset
    minimal = tuple(1 if net.var_nodes[v] in res.min_source_side else 0 for v in range(p.n_vars))
    maximal = tuple(1 if net.var_nodes[v] in res.max_source_side else 0 for v in range(p.n_vars))
    for x in (minimal, maximal):
        if p.evaluate(x) != min_value:
            raise VerificationError("cut projection does not achieve the cut value")
    return MinimizerReport(min_value, tuple(range(p.n_vars)), minimal, maximal, True)
