import random
from fractions import Fraction
from itertools import product

import pytest

from gibbscut.encode import (
    EnergyModel,
    LabelFunction,
    LevelMap,
    apply_order_penalty,
    decode_levels,
    expand_energy_model,
    expand_function,
    mixed_difference,
    model_from_json_dict,
    model_to_json_dict,
    penalty_constant,
    uniform_domain,
)
from gibbscut.errors import EncodeError
from gibbscut.generators import random_label_table
from gibbscut.poly import make_polynomial


def F(*args):
    return Fraction(*args)


def product_fn(n, k, fn):
    return LabelFunction(n, k, fn)


def test_mixed_difference_second_order():
    v = product_fn(2, 2, lambda p: F(p[0] * p[1]))
    assert mixed_difference(v, [0, 1], (1, 1)) == 1
    # constant functions difference to zero
    c = product_fn(2, 2, lambda p: F(5))
    assert mixed_difference(c, [0], (1, 0)) == 0
    assert mixed_difference(c, [0, 1], (2, 2)) == 0


def test_mixed_difference_first_order_is_backward_step():
    rng = random.Random(5)
    v = LabelFunction.from_table(2, 3, random_label_table(rng, 2, 3))
    for mu in range(1, 4):
        for j2 in range(4):
            assert mixed_difference(v, [0], (mu, j2)) == v((mu, j2)) - v((mu - 1, j2))


def test_mixed_difference_permutation_invariance():
    rng = random.Random(9)
    v = LabelFunction.from_table(3, 2, random_label_table(rng, 3, 2))
    point = (2, 1, 2)
    orders = [(0, 1, 2), (2, 1, 0), (1, 2, 0)]
    vals = {mixed_difference(v, order, point) for order in orders}
    assert len(vals) == 1


def test_mixed_difference_rejects_level_zero():
    v = product_fn(2, 2, lambda p: F(p[0]))
    with pytest.raises(EncodeError):
        mixed_difference(v, [0], (0, 1))


def test_expand_product_single_level():
    v = product_fn(2, 1, lambda p: F(p[0] * p[1]))
    ex = expand_function(v)
    assert ex.base_value == 0
    assert ex.poly.monomials == {(0, 1): F(1)}


def test_expand_product_two_levels_all_cross_ones():
    v = product_fn(2, 2, lambda p: F(p[0] * p[1]))
    ex = expand_function(v)
    lm = ex.level_map
    expected = {}
    for mu in (1, 2):
        for nu in (1, 2):
            expected[tuple(sorted((lm.var_id(0, mu), lm.var_id(1, nu))))] = F(1)
    assert ex.poly.monomials == expected


def test_expand_negative_ramp():
    v = product_fn(1, 2, lambda p: F(-p[0]))
    ex = expand_function(v)
    assert ex.poly.monomials == {(0,): F(-1), (1,): F(-1)}


def test_expand_matches_function_on_entire_grid():
    rng = random.Random(13)
    for _ in range(25):
        n = rng.randint(1, 3)
        k = rng.randint(1, 3)
        v = LabelFunction.from_table(n, k, random_label_table(rng, n, k))
        ex = expand_function(v)
        for point in v.grid_points():
            x = ex.level_map.encode(point)
            assert ex.poly.evaluate(x) == v(point) - ex.base_value


def test_expand_grid_cap():
    v = product_fn(3, 3, lambda p: F(sum(p)))
    with pytest.raises(EncodeError):
        expand_function(v, max_grid=10)


def test_penalty_constant_values():
    tilde = make_polynomial([([0], -1), ([1], -1)], n_vars=2)
    assert penalty_constant(tilde) == 3
    assert penalty_constant(make_polynomial([], constant=0, n_vars=2)) == 1
    assert penalty_constant(make_polynomial([([0, 1], 1)], n_vars=2)) == 2


def test_apply_order_penalty_values():
    lm = LevelMap(1, 2)
    tilde = make_polynomial([([0], -1), ([1], -1)], n_vars=2)
    pv = apply_order_penalty(tilde, F(3), lm)
    # unordered assignment pays the penalty
    assert pv.evaluate((0, 1)) == -1 + 3
    # ordered assignment pays nothing
    assert pv.evaluate((1, 1)) == tilde.evaluate((1, 1)) == -2
    assert min(pv.evaluate(x) for x in product((0, 1), repeat=2)) == -2
    # pointwise domination
    for x in product((0, 1), repeat=2):
        assert pv.evaluate(x) >= tilde.evaluate(x)


def test_apply_order_penalty_k1_is_identity():
    lm = LevelMap(3, 1)
    tilde = make_polynomial([([0, 2], -2), ([1], 1)], n_vars=3)
    assert apply_order_penalty(tilde, F(5), lm) == tilde


def test_apply_order_penalty_rejects_nonpositive_c():
    lm = LevelMap(1, 2)
    tilde = make_polynomial([([0], -1)], n_vars=2)
    with pytest.raises(EncodeError):
        apply_order_penalty(tilde, F(0), lm)


def test_penalty_dominance_on_random_tables():
    """Minimum of the penalized polynomial equals the function's minimum,
    and some ordered minimizer decodes to a label minimizer."""
    rng = random.Random(21)
    for _ in range(20):
        n = rng.randint(1, 3)
        k = rng.randint(1, 3)
        if n * k > 8:
            continue
        v = LabelFunction.from_table(n, k, random_label_table(rng, n, k))
        ex = expand_function(v)
        pv = apply_order_penalty(ex.poly, penalty_constant(ex.poly), ex.level_map)
        label_min = min(v(p) for p in v.grid_points())
        values = {}
        for x in product((0, 1), repeat=ex.level_map.n_bool):
            values[x] = pv.evaluate(x)
        bool_min = min(values.values())
        assert bool_min == label_min - ex.base_value
        ordered_argmins = []
        for x, val in values.items():
            if val == bool_min:
                try:
                    ordered_argmins.append(decode_levels(x, ex.level_map))
                except EncodeError:
                    pytest.fail("a minimizer of the penalized polynomial is unordered")
        assert ordered_argmins
        assert all(v(j) == label_min for j in ordered_argmins)


def test_decode_levels():
    assert decode_levels((1, 1), LevelMap(1, 2)) == (2,)
    assert decode_levels((1, 0, 0, 0), LevelMap(2, 2)) == (1, 0)
    with pytest.raises(EncodeError):
        decode_levels((0, 1), LevelMap(1, 2))


def test_levelmap_roundtrip():
    lm = LevelMap(3, 4)
    seen = set()
    for site in range(3):
        for level in range(1, 5):
            var = lm.var_id(site, level)
            assert lm.site_level(var) == (site, level)
            seen.add(var)
    assert seen == set(range(lm.n_bool))
    assert lm.encode((2, 0, 4)) == (1, 1, 0, 0) + (0,) * 4 + (1, 1, 1, 1)


def grid_model(width, height, k, unary, g, lam):
    return EnergyModel(width, height, k, uniform_domain(k, k), tuple(unary), tuple(g), lam)


def test_expand_energy_model_pairwise_k1():
    m = grid_model(2, 1, 1, [(0, 0), (0, 0)], [0, 1], 1)
    ex = expand_energy_model(m)
    assert ex.poly.monomials == {(0,): F(1), (1,): F(1), (0, 1): F(-2)}
    assert ex.base_value == 0


def test_expand_energy_model_single_site():
    m = grid_model(1, 1, 2, [(0, -1, -2)], [0, 1, 2], 1)
    ex = expand_energy_model(m)
    assert ex.penalty == 3
    # tilde was -x(1) - x(2); penalty adds 3*x(2) - 3*x(1)x(2)
    assert ex.poly.monomials == {(0,): F(-1), (1,): F(2), (0, 1): F(-3)}


def test_nonconvex_g_rejected_with_location():
    with pytest.raises(EncodeError) as err:
        grid_model(1, 2, 2, [(0, 0, 0)] * 2, [0, 1, 1], 1)
    assert err.value.violating_d == 1


def test_expand_energy_model_matches_label_enumeration():
    rng = random.Random(31)
    from gibbscut.generators import random_energy_model

    for _ in range(12):
        width = rng.randint(1, 2)
        height = rng.randint(1, 2)
        k = rng.randint(1, 2)
        if width * height * k > 8:
            continue
        m = random_energy_model(rng, width, height, k)
        ex = expand_energy_model(m)
        label_min = min(m.energy(p) for p in product(range(k + 1), repeat=m.n_sites))
        bool_min = min(
            ex.poly.evaluate(x) for x in product((0, 1), repeat=ex.level_map.n_bool)
        )
        assert bool_min + ex.base_value == label_min


def test_expansion_exact_at_encoded_labelings():
    rng = random.Random(33)
    from gibbscut.generators import random_energy_model

    m = random_energy_model(rng, 2, 2, 2)
    ex = expand_energy_model(m)
    for labels in product(range(3), repeat=4):
        x = ex.level_map.encode(labels)
        assert ex.poly.evaluate(x) + ex.base_value == m.energy(labels)


def test_model_json_round_trip():
    m = grid_model(2, 2, 2, [(0, 1, 2)] * 4, [0, 1, 2], F(1, 2))
    doc = model_to_json_dict(m)
    m2 = model_from_json_dict(doc)
    assert m2 == m
    with pytest.raises(EncodeError):
        model_from_json_dict({"k": 2})


def test_order_penalty_preserves_submodularity():
    """The penalty only adds negative pair terms and positive linear ones,
    so a submodular expansion stays submodular."""
    import random

    from gibbscut.generators import random_psuf
    from gibbscut.submod import is_submodular_def

    rng = random.Random(91)
    for _ in range(15):
        lm = LevelMap(rng.randint(1, 3), rng.randint(1, 3))
        tilde = random_psuf(rng, lm.n_bool, degree=3)
        if not is_submodular_def(tilde):
            continue
        pv = apply_order_penalty(tilde, penalty_constant(tilde), lm)
        assert is_submodular_def(pv)
