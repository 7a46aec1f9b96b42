"""Seeded random instance families for benchmarks and tests.

Everything takes an explicit ``random.Random`` so the same seed reproduces
the same instances anywhere.  Families:

* arbitrary signed polynomials (equivalence and necessity tests);
* chain energies (quadratic, submodular by construction);
* gadget-class polynomials: positive higher-order monomials whose pair
  coefficients are driven nonpositive by explicit compensation, so the
  sufficiency test holds by construction;
* submodular-but-not-gadget-class witnesses;
* random grid energy models with convex interaction.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .encode import EnergyModel, uniform_domain
from .poly import Polynomial, make_polynomial

COEF_CHOICES = [Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(5, 2), Fraction(3, 4)]


def _random_coef(rng: random.Random, sign: int = 0) -> Fraction:
    c = rng.choice(COEF_CHOICES)
    if sign > 0:
        return c
    if sign < 0:
        return -c
    return c if rng.random() < 0.5 else -c


def random_polynomial(rng: random.Random, n: int, degree: int, n_terms: int | None = None) -> Polynomial:
    """Arbitrary signed polynomial; degree capped, duplicates merged."""
    if n_terms is None:
        n_terms = rng.randint(1, max(2, 2 * n))
    terms = []
    for _ in range(n_terms):
        size = rng.randint(1, min(degree, n))
        vars_ = rng.sample(range(n), size)
        terms.append((vars_, _random_coef(rng)))
    return make_polynomial(terms, constant=0, n_vars=n)


def random_quadratic(rng: random.Random, n: int, submodular: bool | None = None) -> Polynomial:
    """Random quadratic; pair signs free, all-nonpositive, or all-nonnegative."""
    terms = []
    for i in range(n):
        if rng.random() < 0.7:
            terms.append(([i], _random_coef(rng)))
    for i, j in combinations(range(n), 2):
        if rng.random() < 0.5:
            if submodular is None:
                sign = 0
            else:
                sign = -1 if submodular else 1
            terms.append(([i, j], _random_coef(rng, sign)))
    return make_polynomial(terms, constant=0, n_vars=n)


def random_psuf(rng: random.Random, n: int, degree: int) -> Polynomial:
    """Gadget-class polynomial: positive higher terms fully compensated.

    Every pair's quadratic coefficient is set at or below minus the sum of
    positive higher-order coefficients covering it, so the sufficiency
    condition holds by construction (and the result is submodular).
    """
    terms = []
    pos_cover: dict[tuple[int, int], Fraction] = {}
    n_high = rng.randint(0, max(1, n // 2))
    for _ in range(n_high):
        size = rng.randint(3, max(3, min(degree, n)))
        if size > n:
            continue
        vars_ = sorted(rng.sample(range(n), size))
        coef = _random_coef(rng)
        terms.append((vars_, coef))
        if coef > 0:
            for pair in combinations(vars_, 2):
                pos_cover[pair] = pos_cover.get(pair, Fraction(0)) + coef
    for i in range(n):
        if rng.random() < 0.6:
            terms.append(([i], _random_coef(rng)))
    for pair in combinations(range(n), 2):
        need = pos_cover.get(pair, Fraction(0))
        extra = rng.choice([Fraction(0), Fraction(0), Fraction(1), Fraction(1, 2)])
        want_pair = need > 0 or rng.random() < 0.4
        if want_pair and (need + extra) > 0:
            terms.append((list(pair), -(need + extra)))
    return make_polynomial(terms, constant=0, n_vars=n)


def random_submodular(rng: random.Random, n: int, degree: int = 4) -> Polynomial:
    """Submodular instance: gadget-class or nonpositive-pair quadratic."""
    if degree >= 3 and rng.random() < 0.6:
        return random_psuf(rng, n, degree)
    return random_quadratic(rng, n, submodular=True)


def submodular_not_psuf(n: int = 4) -> Polynomial:
    """Witness that the sufficiency class is a proper subset of submodular.

    The two positive cubics share the pair (0, 1) but cannot fire together
    (the negative quartic cancels them), so every pair residual stays
    nonpositive while the coefficient test on (0, 1) sees -2 + 4 > 0.
    """
    if n < 4:
        raise ValueError("needs at least 4 variables")
    return make_polynomial(
        [
            ([0, 1, 2], 2),
            ([0, 1, 3], 2),
            ([0, 1, 2, 3], -5),
            ([0, 1], -2),
            ([0, 2], -2),
            ([1, 2], -2),
            ([0, 3], -2),
            ([1, 3], -2),
        ],
        constant=0,
        n_vars=n,
    )


def random_chain(rng: random.Random, n: int) -> Polynomial:
    """Path energy: random linear terms, strictly negative couplings."""
    terms = []
    for i in range(n):
        terms.append(([i], _random_coef(rng)))
    for i in range(n - 1):
        terms.append(([i, i + 1], _random_coef(rng, sign=-1)))
    return make_polynomial(terms, constant=0, n_vars=n)


CONVEX_G = {
    "linear": lambda k: [Fraction(d) for d in range(k + 1)],
    "quadratic": lambda k: [Fraction(d * d) for d in range(k + 1)],
    "truncated-slope": lambda k: [Fraction(0)] + [Fraction(d + min(d, 2), 1) for d in range(1, k + 1)],
}


def random_convex_g(rng: random.Random, k: int) -> list[Fraction]:
    """Random convex sequence on 0..k via nondecreasing increments."""
    kind = rng.choice(["linear", "quadratic", "random"])
    if kind != "random":
        return CONVEX_G[kind](k)
    g = [Fraction(0)]
    step = Fraction(rng.randint(0, 2))
    for _ in range(k):
        step += Fraction(rng.randint(0, 2))
        g.append(g[-1] + step)
    return g


def random_energy_model(rng: random.Random, width: int, height: int, k: int) -> EnergyModel:
    unary = tuple(
        tuple(Fraction(rng.randint(0, 12)) for _ in range(k + 1))
        for _ in range(width * height)
    )
    lam = rng.choice([Fraction(1), Fraction(1, 2), Fraction(2), Fraction(3, 2)])
    return EnergyModel(width, height, k, uniform_domain(k, k), unary, tuple(random_convex_g(rng, k)), lam)


def random_label_table(rng: random.Random, n: int, k: int) -> list[Fraction]:
    """Flat random table for a label function on {0..k}^n."""
    return [Fraction(rng.randint(-10, 10)) for _ in range((k + 1) ** n)]
