"""Independent exhaustive oracles used across the test suite.

Everything here works directly off Polynomial.evaluate with Fractions and
itertools enumeration: no kernels, no solver code, so these stay valid
checks of the fast paths.
"""

from fractions import Fraction
from itertools import product


def all_assignments(n):
    return product((0, 1), repeat=n)


def values_by_assignment(p):
    return {x: p.evaluate(x) for x in all_assignments(p.n_vars)}


def minimum_and_argmins(p):
    vals = values_by_assignment(p)
    vmin = min(vals.values())
    return vmin, [x for x, v in vals.items() if v == vmin]


def is_submodular_oracle(p):
    """Literal lattice definition over all assignment pairs."""
    vals = values_by_assignment(p)
    xs = list(vals)
    for a in xs:
        for b in xs:
            meet = tuple(min(u, v) for u, v in zip(a, b))
            join = tuple(max(u, v) for u, v in zip(a, b))
            if vals[meet] + vals[join] > vals[a] + vals[b]:
                return False
    return True


def leq(a, b):
    return all(u <= v for u, v in zip(a, b))


def coordinate_and(xs):
    return tuple(min(col) for col in zip(*xs))


def coordinate_or(xs):
    return tuple(max(col) for col in zip(*xs))


def grid_min_energy_dp(model):
    """Exact minimum of a 4-neighbor grid energy over every labeling.

    Sliding-window dynamic program over sites in row-major order; the state
    is the label window of the last ``width`` sites, so the left neighbor is
    window[-1] and the upper neighbor window[0].  Exhausts the whole label
    space exactly without enumerating it one labeling at a time.
    """
    width = model.width
    k = model.k
    best = {(): Fraction(0)}
    for idx in range(model.n_sites):
        x = idx % width
        new = {}
        for window, cost in best.items():
            for label in range(k + 1):
                c = cost + model.unary[idx][label]
                if x > 0:
                    c += model.lam * model.g[abs(label - window[-1])]
                if len(window) == width:
                    c += model.lam * model.g[abs(label - window[0])]
                nw = window + (label,)
                if len(nw) > width:
                    nw = nw[1:]
                if nw not in new or c < new[nw]:
                    new[nw] = c
        best = new
    return min(best.values())
