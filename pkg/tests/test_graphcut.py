import io
import random
from fractions import Fraction
from itertools import product

import pytest

from gibbscut import kernels
from gibbscut.dimacs import dump_network, parse_network
from gibbscut.errors import NotRepresentableError
from gibbscut.generators import random_psuf, random_quadratic, submodular_not_psuf
from gibbscut.graphcut import (
    FlowNetwork,
    build_network,
    max_flow_min_cut,
    minimize_via_cut,
    neg_monomial_gadget,
    pos_monomial_gadget,
    quadratic_to_network,
)
from gibbscut.poly import make_polynomial
from gibbscut.submod import brute_minimize
from helpers import is_submodular_oracle, minimum_and_argmins

TRIPLE = make_polynomial(
    [([0, 1, 2], 2), ([0, 1], -3), ([0, 2], -3), ([1, 2], -3)], n_vars=3
)

GADGET_COEFS = [Fraction(1), Fraction(3), Fraction(5, 2)]


def gadget_min_over_aux(g, n_vars, aux_ids, x_bits):
    p = g.polynomial(n_vars, aux_ids)
    best = None
    for z in product((0, 1), repeat=len(aux_ids)):
        full = list(x_bits) + [0] * (n_vars - len(x_bits))
        for zid, zb in zip(aux_ids, z):
            full[zid] = zb
        val = p.evaluate(tuple(full))
        best = val if best is None else min(best, val)
    return best


def test_positive_gadget_closed_forms():
    g3 = pos_monomial_gadget([0, 1, 2], Fraction(1))
    assert g3.b == (Fraction(1),) and g3.e == (Fraction(-2),)
    g4 = pos_monomial_gadget([0, 1, 2, 3], Fraction(1))
    assert g4.b == (Fraction(2),) and g4.e == (Fraction(-5),)
    g5 = pos_monomial_gadget(range(5), Fraction(1))
    assert g5.b == (Fraction(2), Fraction(1))
    assert g5.e == (Fraction(-7), Fraction(-2))
    for m in range(3, 9):
        for a in GADGET_COEFS:
            g = pos_monomial_gadget(range(m), a)
            if m % 2:
                l = (m - 1) // 2
                assert g.b == tuple([2 * a] * (l - 1) + [a])
                assert g.e == tuple([-(2 * m - 4 * j + 1) * a for j in range(1, l)] + [-2 * a])
            else:
                l = (m - 2) // 2
                assert g.b == tuple([2 * a] * l)
                assert g.e == tuple(-(2 * m - 4 * j + 1) * a for j in range(1, l + 1))
            assert all(bj > 0 for bj in g.b) and all(ej < 0 for ej in g.e)


def test_even_m_implied_equation():
    # the all-aux row of the defining system follows from the solved ones:
    # sum e_j must equal -a*C(m,2) + a
    for m in (4, 6, 8):
        for a in GADGET_COEFS:
            g = pos_monomial_gadget(range(m), a)
            assert sum(g.e) == -a * Fraction(m * (m - 1), 2) + a


def test_negative_gadget_values():
    g = neg_monomial_gadget([0, 1, 2], Fraction(-1))
    aux = (3,)
    assert gadget_min_over_aux(g, 4, aux, (1, 1, 1)) == -1
    for x in product((0, 1), repeat=3):
        if not all(x):
            assert gadget_min_over_aux(g, 4, aux, x) == 0

    g5 = neg_monomial_gadget(range(5), Fraction(-3))
    aux5 = (5,)
    for x in product((0, 1), repeat=5):
        if sum(x) == 3:
            assert gadget_min_over_aux(g5, 6, aux5, x) == 0


def test_gadget_rejects_wrong_sign_and_degree():
    with pytest.raises(NotRepresentableError):
        neg_monomial_gadget([0, 1, 2], Fraction(1))
    with pytest.raises(NotRepresentableError):
        neg_monomial_gadget([0, 1], Fraction(-1))
    with pytest.raises(NotRepresentableError):
        pos_monomial_gadget([0, 1, 2], Fraction(-1))
    with pytest.raises(NotRepresentableError):
        pos_monomial_gadget([0, 1], Fraction(1))


def test_gadget_identity_exhaustive():
    """Min over aux equals the represented polynomial on every input,
    for both kinds, m = 3..8, and several coefficient magnitudes."""
    for m in range(3, 9):
        for mag in GADGET_COEFS:
            for kind, a in (("negative", -mag), ("positive", mag)):
                g = (neg_monomial_gadget if kind == "negative" else pos_monomial_gadget)(
                    range(m), a
                )
                aux = tuple(range(m, m + g.aux_count))
                n_vars = m + g.aux_count
                for x in product((0, 1), repeat=m):
                    assert gadget_min_over_aux(g, n_vars, aux, x) == g.represented_value(x)


def test_gadget_tightness_witnesses():
    """The recorded aux vectors achieve the minimum at each Hamming weight."""
    for m in range(3, 9):
        for mag in GADGET_COEFS:
            for builder, a in ((neg_monomial_gadget, -mag), (pos_monomial_gadget, mag)):
                g = builder(range(m), a)
                aux = tuple(range(m, m + g.aux_count))
                n_vars = m + g.aux_count
                p = g.polynomial(n_vars, aux)
                for kappa in range(m + 1):
                    x = (1,) * kappa + (0,) * (m - kappa)
                    full = list(x) + [0] * g.aux_count
                    for zid, zb in zip(aux, g.tight_aux[kappa]):
                        full[zid] = zb
                    assert p.evaluate(tuple(full)) == g.represented_value(x)


def enumerate_cut_identity(net, n_inner_vars):
    """Yield (labeling of inner nodes 1..N, cut cost)."""
    inner = range(1, net.n_nodes - 1)
    for bits in product((0, 1), repeat=len(inner)):
        side = {net.s} | {node for node, b in zip(inner, bits) if b}
        yield bits, net.cut_cost(side)


def test_quadratic_network_example():
    p = make_polynomial([([0], 1), ([0, 1], -2)], n_vars=2)
    net = quadratic_to_network(p)
    assert net.offset == -1
    assert set(net.arcs) == {(1, 2, Fraction(2)), (0, 1, Fraction(1))}
    # cut cost at z=(1,1) is 0, so the polynomial value there is -1
    assert net.cut_cost({0, 1, 2}) == 0
    for bits, cost in enumerate_cut_identity(net, 2):
        assert cost == p.evaluate(bits) - net.offset


def test_quadratic_network_linear_only():
    p = make_polynomial([([0], 3)], n_vars=1)
    net = quadratic_to_network(p)
    assert net.arcs == ((1, 2, Fraction(3)),)
    assert net.offset == 0


def test_quadratic_network_rejects_positive_pair():
    with pytest.raises(NotRepresentableError) as err:
        quadratic_to_network(make_polynomial([([0, 1], 1)], n_vars=2))
    assert err.value.pair == (0, 1)
    with pytest.raises(NotRepresentableError):
        quadratic_to_network(make_polynomial([([0, 1, 2], -1)], n_vars=3))


def test_quadratic_network_cut_identity_random():
    rng = random.Random(201)
    for _ in range(30):
        p = random_quadratic(rng, rng.randint(1, 6), submodular=True)
        net = quadratic_to_network(p)
        for bits, cost in enumerate_cut_identity(net, p.n_vars):
            assert cost == p.evaluate(bits) - net.offset


def test_rejection_matches_definition_for_quadratics():
    """Necessity: the builder rejects exactly the
    nonsubmodular quadratics (ground truth by the lattice definition)."""
    rng = random.Random(202)
    rejected = accepted = 0
    for _ in range(200):
        p = random_quadratic(rng, rng.randint(2, 6))
        truth = is_submodular_oracle(p)
        try:
            quadratic_to_network(p)
            ok = True
            accepted += 1
        except NotRepresentableError:
            ok = False
            rejected += 1
        assert ok == truth
    assert rejected > 30 and accepted > 30


def test_build_network_triple_positive_monomial():
    net = build_network(TRIPLE)
    assert len(net.aux_nodes) == 1
    # compensated pair layer: -3 + 2 = -1 per pair
    inner_pair_arcs = [a for a in net.arcs if a[0] != net.s and a[1] != net.t and a[0] not in net.aux_nodes]
    assert all(c == 1 for _, _, c in inner_pair_arcs)
    rep = minimize_via_cut(TRIPLE)
    assert rep.min_value == -7
    assert rep.minimal == rep.maximal == (1, 1, 1)


def test_build_network_single_negative_monomial():
    p = make_polynomial([([0, 1, 2], -1)], n_vars=3)
    net = build_network(p)
    assert len(net.aux_nodes) == 1
    rep = minimize_via_cut(p)
    assert rep.min_value == -1
    assert rep.maximal == (1, 1, 1)
    # minimal minimizer: every assignment with a zero coordinate also hits 0?
    # no: value 0 is achieved by many, but the minimum is -1 at all-ones only
    assert rep.minimal == (1, 1, 1)


def test_build_network_quadratic_matches_direct_builder():
    rng = random.Random(203)
    for _ in range(10):
        p = random_quadratic(rng, 4, submodular=True)
        via_generic = build_network(p)
        direct = quadratic_to_network(p)
        assert via_generic.aux_nodes == ()
        assert set(via_generic.arcs) == set(direct.arcs)
        assert via_generic.offset == direct.offset


def test_build_network_rejects_outside_class():
    with pytest.raises(NotRepresentableError):
        build_network(make_polynomial([([0, 1], 1)], n_vars=2))
    # submodular but outside the sufficiency class is refused too
    with pytest.raises(NotRepresentableError):
        build_network(submodular_not_psuf())


def test_build_network_node_count_bound():
    rng = random.Random(204)
    for _ in range(20):
        p = random_psuf(rng, rng.randint(3, 6), degree=5)
        net = build_network(p)
        high = [(vars_, c) for vars_, c in p.monomials.items() if len(vars_) >= 3]
        if high:
            m = max(len(v) for v, _ in high)
            bound = len(high) * (m - 1) // 2 + p.n_vars
            assert net.n_nodes - 2 <= bound
        assert net.n_nodes == p.n_vars + len(net.aux_nodes) + 2


def test_build_network_representability_exhaustive():
    """Definition-level check: min over aux labelings of cut cost + offset
    equals P at every original assignment."""
    rng = random.Random(205)
    checked = 0
    for _ in range(40):
        n = rng.randint(2, 4)
        p = random_psuf(rng, n, degree=min(4, n))
        net = build_network(p)
        if net.n_nodes - 2 > 10:
            continue
        checked += 1
        best: dict[tuple, Fraction] = {}
        for bits, cost in enumerate_cut_identity(net, net.n_nodes - 2):
            x = bits[: p.n_vars]
            val = cost + net.offset
            if x not in best or val < best[x]:
                best[x] = val
        for x in product((0, 1), repeat=p.n_vars):
            assert best[x] == p.evaluate(x)
    assert checked > 20


def test_max_flow_examples():
    two_hop = FlowNetwork(3, ((0, 1, Fraction(2)), (1, 2, Fraction(1))), Fraction(0))
    res = max_flow_min_cut(two_hop)
    assert res.cut_value == 1
    assert res.min_source_side == {0, 1} and res.max_source_side == {0, 1}

    tight = FlowNetwork(3, ((0, 1, Fraction(1)), (1, 2, Fraction(1))), Fraction(0))
    res2 = max_flow_min_cut(tight)
    assert res2.cut_value == 1
    assert res2.min_source_side == {0}
    assert res2.max_source_side == {0, 1}

    lonely = FlowNetwork(4, ((0, 1, Fraction(1)), (1, 3, Fraction(2))), Fraction(0))
    res3 = max_flow_min_cut(lonely)
    # node 2 has no arcs: excluded from the minimal side, included in the maximal
    assert 2 not in res3.min_source_side
    assert 2 in res3.max_source_side


def test_max_flow_fractional_capacities():
    net = FlowNetwork(3, ((0, 1, Fraction(3, 2)), (1, 2, Fraction(2, 3))), Fraction(0))
    assert max_flow_min_cut(net).cut_value == Fraction(2, 3)


def test_minimize_via_cut_examples():
    rep = minimize_via_cut(make_polynomial([([0, 1], -1)], n_vars=2))
    assert (rep.min_value, rep.minimal, rep.maximal) == (-1, (1, 1), (1, 1))

    rep2 = minimize_via_cut(make_polynomial([([0], 1), ([1], 1), ([0, 1], -2)], n_vars=2))
    assert (rep2.min_value, rep2.minimal, rep2.maximal) == (0, (0, 0), (1, 1))


def test_minimize_via_cut_matches_brute_on_random_instances():
    rng = random.Random(206)
    for _ in range(80):
        n = rng.randint(2, 10)
        p = random_psuf(rng, n, degree=min(5, n))
        cut = minimize_via_cut(p)
        brute = brute_minimize(p)
        assert cut.min_value == brute.min_value
        assert cut.minimal == brute.minimal
        assert cut.maximal == brute.maximal
        assert brute.lattice


def test_extreme_minimizer_projection_soundness():
    rng = random.Random(207)
    for _ in range(30):
        p = random_psuf(rng, rng.randint(2, 6), degree=4)
        cut = minimize_via_cut(p)
        vmin, argmins = minimum_and_argmins(p)
        assert cut.min_value == vmin
        assert cut.minimal == tuple(min(col) for col in zip(*argmins))
        assert cut.maximal == tuple(max(col) for col in zip(*argmins))


def test_dimacs_round_trip():
    net = build_network(TRIPLE)
    buf = io.StringIO()
    scale = dump_network(net, buf)
    parsed = parse_network(io.StringIO(buf.getvalue()))
    assert parsed.n_nodes == net.n_nodes
    assert parsed.scale == scale
    assert parsed.offset == net.offset
    assert len(parsed.arcs) == len(net.arcs)
    # re-solving the dump reproduces the minimum
    flow, _, _ = kernels.solve_max_flow(parsed.n_nodes, parsed.s, parsed.t, list(parsed.arcs))
    assert Fraction(flow, parsed.scale) + parsed.offset == -7


def test_dimacs_scaling():
    net = FlowNetwork(3, ((0, 1, Fraction(3, 2)), (1, 2, Fraction(2, 3))), Fraction(-1, 6))
    buf = io.StringIO()
    scale = dump_network(net, buf)
    assert scale == 6
    parsed = parse_network(io.StringIO(buf.getvalue()))
    assert parsed.arcs == ((0, 1, 9), (1, 2, 4))
    assert parsed.offset == Fraction(-1, 6)


def test_minimize_via_cut_degenerate_inputs():
    # constant polynomial: every assignment optimal, extremes straddle the cube
    c = make_polynomial([], constant=Fraction(7, 3), n_vars=3)
    rep = minimize_via_cut(c)
    assert rep.min_value == Fraction(7, 3)
    assert rep.minimal == (0, 0, 0) and rep.maximal == (1, 1, 1)
    # pure linear: signs decide coordinates, zeros stay free
    lin = make_polynomial([([0], 2), ([1], -3)], n_vars=3)
    rep2 = minimize_via_cut(lin)
    assert rep2.min_value == -3
    assert rep2.minimal == (0, 1, 0) and rep2.maximal == (0, 1, 1)


def test_minimize_via_cut_beyond_int64_capacities():
    """Huge denominators push the scaled capacities past int64; the flow
    solve must route to the exact big-integer lane and stay correct."""
    huge = Fraction(1, (1 << 40) + 1)
    tiny = Fraction(1, 3**30)
    p = make_polynomial(
        [([0], 1), ([1], 1), ([0, 1], -2 - huge), ([0, 2], -tiny)], n_vars=3
    )
    rep = minimize_via_cut(p)
    brute = brute_minimize(p)
    assert rep.min_value == brute.min_value == -huge - tiny
    assert rep.minimal == brute.minimal
    assert rep.maximal == brute.maximal


def test_build_network_cut_cost_matches_lifted_polynomial():
    """Per-labeling identity: for every assignment of original + aux nodes,
    the cut cost equals the lifted polynomial (compensated quadratic layer
    plus the gadget polynomials) minus the network offset.  The lifted
    polynomial is reassembled here independently of the arc builder."""
    rng = random.Random(208)
    checked = 0
    for _ in range(40):
        n = rng.randint(2, 4)
        p = random_psuf(rng, n, degree=min(4, n))
        net = build_network(p)
        n_inner = net.n_nodes - 2
        if n_inner > 10:
            continue

        # quadratic layer of P plus the carried compensations, over inner nodes
        from gibbscut.graphcut import pos_monomial_gadget as _pos, neg_monomial_gadget as _neg
        from gibbscut.poly import make_polynomial as mk

        terms = []
        gadget_polys = []
        aux_cursor = n
        for vars_, coef in p.terms():
            if len(vars_) <= 2:
                terms.append((list(vars_), coef))
            else:
                g = _neg(vars_, coef) if coef < 0 else _pos(vars_, coef)
                aux_ids = tuple(range(aux_cursor, aux_cursor + g.aux_count))
                aux_cursor += g.aux_count
                gadget_polys.append(g.polynomial(n_inner, aux_ids))
                for pair, carried in g.compensation:
                    terms.append((list(pair), -carried))
        lifted = mk(terms, constant=p.constant, n_vars=n_inner)
        for q in gadget_polys:
            lifted = lifted + q
        assert aux_cursor == n_inner

        for bits, cost in enumerate_cut_identity(net, n_inner):
            assert cost == lifted.evaluate(bits) - net.offset
        checked += 1
    assert checked > 25
