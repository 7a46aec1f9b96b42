"""Expansion of functions over finite ordered label sets into Boolean polynomials.

An integer label j_i in 0..k is encoded by k ordered Boolean level variables
x_i(1) >= x_i(2) >= ... >= x_i(k) with j_i = sum of set levels.  Any total
function V on the label grid then expands exactly into a multilinear
polynomial whose coefficient on x_{l_1}(mu_1)...x_{l_m}(mu_m) is the mixed
backward difference of V over sites l_1..l_m taken at the point with label
mu_kappa at site l_kappa and zero elsewhere.  The expansion reproduces
V(j) - V(0) at every grid point.

Minimizing over unconstrained Boolean variables additionally needs the level
ordering enforced: a quadratic penalty C * sum (x_i(l) - x_i(l-1)) * x_i(l)
with C exceeding the coefficient mass of the expansion makes every unordered
assignment strictly suboptimal while vanishing on ordered ones.

Structured grid energies (per-site cost tables plus a convex penalty g of
the label difference on 4-neighbor pairs) are expanded term by term; mixed
differences are linear in V, so the sum of per-term expansions equals the
whole-grid expansion at a fraction of the cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .errors import EncodeError
from .poly import Assignment, Polynomial, as_fraction

LabelPoint = tuple[int, ...]


@dataclass(frozen=True)
class OrderedDomain:
    """Nondecreasing label values r_0 <= r_1 <= ... <= r_k."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(as_fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 2:
            raise EncodeError("ordered domain needs at least two values (k >= 1)")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise EncodeError("domain values must be nondecreasing")

    @property
    def k(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class LevelMap:
    """Bijection between (site i, level l) pairs and Boolean variable ids.

    Site-major layout: variable id = i * k + (l - 1) for i in 0..n-1 and
    l in 1..k.
    """

    n: int
    k: int

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise EncodeError("level map needs n >= 1 sites and k >= 1 levels")

    @property
    def n_bool(self) -> int:
        return self.n * self.k

    def var_id(self, site: int, level: int) -> int:
        if not 0 <= site < self.n:
            raise EncodeError(f"site {site} out of range")
        if not 1 <= level <= self.k:
            raise EncodeError(f"level {level} out of range 1..{self.k}")
        return site * self.k + (level - 1)

    def site_level(self, var: int) -> tuple[int, int]:
        if not 0 <= var < self.n_bool:
            raise EncodeError(f"variable {var} out of range")
        return var // self.k, var % self.k + 1

    def encode(self, labels: LabelPoint) -> Assignment:
        """Ordered Boolean encoding of a label vector."""
        if len(labels) != self.n:
            raise EncodeError(f"label vector length {len(labels)} != {self.n}")
        bits = []
        for j in labels:
            if not 0 <= j <= self.k:
                raise EncodeError(f"label {j} out of range 0..{self.k}")
            bits.extend([1] * j + [0] * (self.k - j))
        return tuple(bits)


class LabelFunction:
    """Total function on the label grid {0..k}^n, table- or oracle-backed."""

    def __init__(self, n: int, k: int, fn: Callable[[LabelPoint], Fraction]):
        if n < 1 or k < 1:
            raise EncodeError("label function needs n >= 1 and k >= 1")
        self.n = n
        self.k = k
        self._fn = fn
        self._cache: dict[LabelPoint, Fraction] = {}

    @classmethod
    def from_table(cls, n: int, k: int, values: Sequence) -> "LabelFunction":
        """Flat table in row-major label order (last site's label fastest)."""
        expected = (k + 1) ** n
        if len(values) != expected:
            raise EncodeError(f"table needs {expected} values, got {len(values)}")
        table = [as_fraction(v) for v in values]

        def fn(point: LabelPoint) -> Fraction:
            idx = 0
            for j in point:
                idx = idx * (k + 1) + j
            return table[idx]

        return cls(n, k, fn)

    def __call__(self, point: LabelPoint) -> Fraction:
        if len(point) != self.n:
            raise EncodeError(f"point length {len(point)} != {self.n}")
        if any(not 0 <= j <= self.k for j in point):
            raise EncodeError(f"point {point} outside grid 0..{self.k}")
        point = tuple(point)
        cached = self._cache.get(point)
        if cached is None:
            cached = self._cache[point] = as_fraction(self._fn(point))
        return cached

    def grid_points(self) -> Iterable[LabelPoint]:
        return product(range(self.k + 1), repeat=self.n)


def mixed_difference(v: LabelFunction, sites: Iterable[int], point: LabelPoint) -> Fraction:
    """Mixed backward difference of V over ``sites`` at ``point``.

    Inclusion-exclusion over subsets of the differencing sites; the order of
    ``sites`` is immaterial.  Requires point[i] >= 1 for each differencing
    site (the backward step must exist).
    """
    given = list(sites)
    site_list = sorted(set(given))
    if len(site_list) != len(given):
        raise EncodeError("duplicate site in difference index set")
    if len(point) != v.n:
        raise EncodeError(f"point length {len(point)} != {v.n}")
    for i in site_list:
        if not 0 <= i < v.n:
            raise EncodeError(f"site {i} out of range")
        if point[i] < 1:
            raise EncodeError(f"difference at level 0 for site {i}")
    total = Fraction(0)
    for r in range(len(site_list) + 1):
        for subset in combinations(site_list, r):
            shifted = list(point)
            for i in subset:
                shifted[i] -= 1
            total += (-1) ** r * v(tuple(shifted))
    return total


@dataclass(frozen=True)
class Expansion:
    """Boolean polynomial form of a label function.

    ``poly`` vanishes at the all-zeros assignment; the function's value at
    the all-zeros label point is carried in ``base_value``.  When ``penalty``
    is set, the ordering penalty with that constant has been added.
    """

    poly: Polynomial
    level_map: LevelMap
    base_value: Fraction
    penalty: Fraction | None = None


def expand_function(v: LabelFunction, max_grid: int = 1 << 16) -> Expansion:
    """Exact expansion of V into level variables (table-scale grids only).

    Every coefficient is a mixed difference of V, so the full grid is
    enumerated; use :func:`expand_energy_model` for structured energies.
    """
    n, k = v.n, v.k
    if (k + 1) ** n > max_grid:
        raise EncodeError(
            f"grid has {(k + 1) ** n} points (cap {max_grid}); expand per term instead"
        )
    lm = LevelMap(n, k)
    monomials: dict[tuple[int, ...], Fraction] = {}
    for m in range(1, n + 1):
        for combo in combinations(range(n), m):
            for levels in product(range(1, k + 1), repeat=m):
                point = [0] * n
                for site, mu in zip(combo, levels):
                    point[site] = mu
                coef = mixed_difference(v, combo, tuple(point))
                if coef:
                    key = tuple(sorted(lm.var_id(site, mu) for site, mu in zip(combo, levels)))
                    monomials[key] = coef
    tilde = Polynomial(lm.n_bool, Fraction(0), monomials)
    return Expansion(tilde, lm, v(tuple([0] * n)))


def penalty_constant(tilde: Polynomial) -> Fraction:
    """Safe ordering-penalty weight: one plus the coefficient mass.

    Any single ordering violation then costs more than the whole range of
    the expansion, so no unordered assignment can be optimal.
    """
    return Fraction(1) + sum((abs(c) for c in tilde.monomials.values()), Fraction(0))


def apply_order_penalty(tilde: Polynomial, c: Fraction, lm: LevelMap) -> Polynomial:
    """Add C * sum_i sum_{l>=2} (x_i(l) - x_i(l-1)) * x_i(l) to the expansion."""
    c = as_fraction(c)
    if c <= 0:
        raise EncodeError(f"penalty constant must be positive, got {c}")
    if tilde.n_vars != lm.n_bool:
        raise EncodeError("polynomial does not match the level map")
    merged = dict(tilde.monomials)

    def add(key: tuple[int, ...], coef: Fraction):
        val = merged.get(key, Fraction(0)) + coef
        if val:
            merged[key] = val
        else:
            merged.pop(key, None)

    for site in range(lm.n):
        for level in range(2, lm.k + 1):
            hi = lm.var_id(site, level)
            lo = lm.var_id(site, level - 1)
            add((hi,), c)
            add(tuple(sorted((lo, hi))), -c)
    return Polynomial(tilde.n_vars, tilde.constant, merged)


def decode_levels(x: Assignment, lm: LevelMap) -> LabelPoint:
    """Labels from an ordered Boolean assignment: j_i = number of set levels."""
    if len(x) != lm.n_bool:
        raise EncodeError(f"assignment length {len(x)} != {lm.n_bool}")
    labels = []
    for site in range(lm.n):
        bits = [x[lm.var_id(site, level)] for level in range(1, lm.k + 1)]
        if any(a < b for a, b in zip(bits, bits[1:])):
            raise EncodeError(f"levels of site {site} are not ordered: {bits}")
        labels.append(sum(bits))
    return tuple(labels)


# ---------------------------------------------------------------------------
# Structured grid energies


@dataclass(frozen=True)
class EnergyModel:
    """Grid energy: per-site cost tables plus convex label-difference penalty.

    Sites form a width x height 4-neighbor lattice in row-major order.  The
    pairwise cost of labels (a, b) on neighboring sites is lam * g(|a - b|);
    g must be convex as a sequence (nondecreasing increments), which keeps
    the expanded polynomial submodular.
    """

    width: int
    height: int
    k: int
    domain: OrderedDomain
    unary: tuple[tuple[Fraction, ...], ...]
    g: tuple[Fraction, ...]
    lam: Fraction

    def __post_init__(self):
        if self.width < 1 or self.height < 1 or self.k < 1:
            raise EncodeError("model needs width, height >= 1 and k >= 1")
        if self.domain.k != self.k:
            raise EncodeError(f"domain has {self.domain.k + 1} values, expected {self.k + 1}")
        unary = tuple(tuple(as_fraction(c) for c in site) for site in self.unary)
        object.__setattr__(self, "unary", unary)
        if len(unary) != self.n_sites:
            raise EncodeError(f"need {self.n_sites} unary tables, got {len(unary)}")
        if any(len(site) != self.k + 1 for site in unary):
            raise EncodeError(f"each unary table needs {self.k + 1} entries")
        g = tuple(as_fraction(c) for c in self.g)
        object.__setattr__(self, "g", g)
        if len(g) != self.k + 1:
            raise EncodeError(f"g needs {self.k + 1} entries, got {len(g)}")
        for d in range(1, self.k):
            if g[d + 1] - g[d] < g[d] - g[d - 1]:
                raise EncodeError(f"pairwise cost g is not convex at d={d}", violating_d=d)
        object.__setattr__(self, "lam", as_fraction(self.lam))

    @property
    def n_sites(self) -> int:
        return self.width * self.height

    def site(self, x: int, y: int) -> int:
        return y * self.width + x

    def neighbor_pairs(self) -> list[tuple[int, int]]:
        pairs = []
        for y in range(self.height):
            for x in range(self.width):
                s = self.site(x, y)
                if x + 1 < self.width:
                    pairs.append((s, s + 1))
                if y + 1 < self.height:
                    pairs.append((s, s + self.width))
        return pairs

    def energy(self, labels: LabelPoint) -> Fraction:
        """Direct evaluation over label indices (the model-level oracle)."""
        if len(labels) != self.n_sites:
            raise EncodeError(f"labeling length {len(labels)} != {self.n_sites}")
        total = Fraction(0)
        for s, j in enumerate(labels):
            total += self.unary[s][j]
        for a, b in self.neighbor_pairs():
            total += self.lam * self.g[abs(labels[a] - labels[b])]
        return total

    def label_values(self, labels: LabelPoint) -> tuple[Fraction, ...]:
        return tuple(self.domain.values[j] for j in labels)


def expand_energy_model(model: EnergyModel) -> Expansion:
    """Per-term expansion of a grid energy plus one shared ordering penalty.

    Each unary table and each neighbor interaction is expanded on its own
    (differences are linear in V), translated onto the global level
    variables, and summed; the penalty constant is computed from the summed
    expansion.
    """
    k = model.k
    lm = LevelMap(model.n_sites, k)
    monomials: dict[tuple[int, ...], Fraction] = {}
    base = Fraction(0)

    def add(key: tuple[int, ...], coef: Fraction):
        val = monomials.get(key, Fraction(0)) + coef
        if val:
            monomials[key] = val
        else:
            monomials.pop(key, None)

    for s in range(model.n_sites):
        table = model.unary[s]
        base += table[0]
        for level in range(1, k + 1):
            coef = table[level] - table[level - 1]
            if coef:
                add((lm.var_id(s, level),), coef)

    pairs = model.neighbor_pairs()
    if pairs:
        # one interaction stencil serves every neighbor pair
        pair_fn = LabelFunction(2, k, lambda p: model.lam * model.g[abs(p[0] - p[1])])
        stencil = expand_function(pair_fn)
        base += model.lam * model.g[0] * len(pairs)
        local = [(vars_, coef) for vars_, coef in stencil.poly.monomials.items()]
        for a, b in pairs:
            sites = (a, b)
            for vars_, coef in local:
                key = tuple(sorted(
                    lm.var_id(sites[v // k], v % k + 1) for v in vars_
                ))
                add(key, coef)

    tilde = Polynomial(lm.n_bool, Fraction(0), monomials)
    c = penalty_constant(tilde)
    penalized = apply_order_penalty(tilde, c, lm)
    return Expansion(penalized, lm, base, penalty=c)


# ---------------------------------------------------------------------------
# Model file format:
#   {"width": W, "height": H, "k": K, "domain": [r_0..r_K],
#    "unary": [[k+1 costs] per site]  |  {"from_image": "img.pgm", "data": "absolute"|"quadratic"},
#    "pairwise": {"g": [g(0)..g(K)], "lambda": "p/q"}}


def uniform_domain(maxval: int, k: int) -> OrderedDomain:
    """k+1 evenly spaced representatives spanning 0..maxval."""
    return OrderedDomain(tuple(Fraction(level * maxval, k) for level in range(k + 1)))


def data_term(kind: str, domain: OrderedDomain, pixel: int) -> tuple[Fraction, ...]:
    """Per-level data cost of one pixel: absolute or squared deviation."""
    if kind == "absolute":
        return tuple(abs(r - pixel) for r in domain.values)
    if kind == "quadratic":
        return tuple((r - pixel) ** 2 for r in domain.values)
    raise EncodeError(f"unknown data term {kind!r} (want absolute or quadratic)")


def model_from_image(pixels: Sequence[int], width: int, height: int, maxval: int,
                     k: int, lam, data: str = "absolute",
                     g: Sequence | None = None) -> EnergyModel:
    """Denoising energy for a gray image: data term vs original pixels."""
    domain = uniform_domain(maxval, k)
    unary = tuple(data_term(data, domain, p) for p in pixels)
    g_seq = tuple(as_fraction(v) for v in g) if g is not None else tuple(Fraction(d) for d in range(k + 1))
    return EnergyModel(width, height, k, domain, unary, g_seq, as_fraction(lam))


def model_from_json_dict(doc: dict, base_dir: str = ".") -> EnergyModel:
    try:
        k = int(doc["k"])
        pairwise = doc["pairwise"]
        g = [as_fraction(v) for v in pairwise["g"]]
        lam = as_fraction(pairwise["lambda"])
        unary_doc = doc["unary"]
        if isinstance(unary_doc, dict):
            from .pgm import read_pgm  # local import: models without images never need it

            import os.path

            img = read_pgm(os.path.join(base_dir, unary_doc["from_image"]))
            width, height = img.width, img.height
            if "width" in doc and int(doc["width"]) != width:
                raise EncodeError("model width disagrees with the attached image")
            if "height" in doc and int(doc["height"]) != height:
                raise EncodeError("model height disagrees with the attached image")
            if "domain" in doc:
                domain = OrderedDomain(tuple(as_fraction(v) for v in doc["domain"]))
            else:
                domain = uniform_domain(img.maxval, k)
            unary = tuple(data_term(unary_doc.get("data", "absolute"), domain, p)
                          for p in img.pixels)
        else:
            width = int(doc["width"])
            height = int(doc["height"])
            domain = OrderedDomain(tuple(as_fraction(v) for v in doc["domain"]))
            unary = tuple(tuple(as_fraction(c) for c in site) for site in unary_doc)
        return EnergyModel(width, height, k, domain, unary, tuple(g), lam)
    except (KeyError, TypeError, ValueError) as exc:
        raise EncodeError(f"malformed model document: {exc}") from exc


def model_to_json_dict(model: EnergyModel) -> dict:
    return {
        "width": model.width,
        "height": model.height,
        "k": model.k,
        "domain": [str(v) for v in model.domain.values],
        "unary": [[str(c) for c in site] for site in model.unary],
        "pairwise": {"g": [str(v) for v in model.g], "lambda": str(model.lam)},
    }
