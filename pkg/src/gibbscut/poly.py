"""Exact multilinear Boolean polynomials over the rationals.

A polynomial in n Boolean variables x_0 .. x_{n-1} is stored in canonical
form as a constant plus a mapping

    monomials : dict[tuple[int, ...], Fraction]

whose keys are strictly increasing tuples of variable indices (multilinear:
no variable repeats inside a monomial) and whose values are nonzero exact
rationals.  Equal polynomials always have identical canonical forms, so
``==`` is reliable polynomial identity.

All coefficients are Fractions end to end; floats are rejected at the door
because every downstream equivalence (min-cut values, minimizer lattices)
is an exact statement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import PolynomialError

VarId = int
Assignment = tuple[int, ...]
PartialAssignment = Mapping[int, int]


def as_fraction(value) -> Fraction:
    """Coerce int/Fraction/"p/q" string to Fraction; floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise PolynomialError(f"coefficients must be exact rationals, got {value!r}")
    return Fraction(value)


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Canonical multilinear polynomial: constant + sum of monomials.

    Instances are treated as immutable after construction; never mutate
    ``monomials`` in place.  Use :func:`make_polynomial` rather than the
    raw constructor so canonicalization and validation always run.
    """

    n_vars: int
    constant: Fraction = Fraction(0)
    monomials: dict[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.n_vars == other.n_vars
            and self.constant == other.constant
            and self.monomials == other.monomials
        )

    def __hash__(self):
        return hash((self.n_vars, self.constant, frozenset(self.monomials.items())))

    def degree(self) -> int:
        return max((len(v) for v in self.monomials), default=0)

    def support(self) -> frozenset[int]:
        """Variables that actually occur in some monomial."""
        out: set[int] = set()
        for vars_ in self.monomials:
            out.update(vars_)
        return frozenset(out)

    def terms(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        """Monomials in a deterministic order (by degree, then indices)."""
        for vars_ in sorted(self.monomials, key=lambda v: (len(v), v)):
            yield vars_, self.monomials[vars_]

    def coefficient(self, vars_: Iterable[int]) -> Fraction:
        return self.monomials.get(tuple(sorted(vars_)), Fraction(0))

    def evaluate(self, x: Assignment) -> Fraction:
        """Exact value at a 0/1 assignment of length n_vars."""
        if len(x) != self.n_vars:
            raise PolynomialError(f"assignment length {len(x)} != n_vars {self.n_vars}")
        if any(b not in (0, 1) for b in x):
            raise PolynomialError("assignment entries must be 0 or 1")
        total = self.constant
        for vars_, coef in self.monomials.items():
            if all(x[v] for v in vars_):
                total += coef
        return total

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if self.n_vars != other.n_vars:
            raise PolynomialError("cannot add polynomials with different n_vars")
        merged = dict(self.monomials)
        for vars_, coef in other.monomials.items():
            c = merged.get(vars_, Fraction(0)) + coef
            if c:
                merged[vars_] = c
            else:
                merged.pop(vars_, None)
        return Polynomial(self.n_vars, self.constant + other.constant, merged)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.n_vars, -self.constant, {v: -c for v, c in self.monomials.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, factor) -> "Polynomial":
        f = as_fraction(factor)
        if f == 0:
            return Polynomial(self.n_vars)
        return Polynomial(self.n_vars, self.constant * f, {v: c * f for v, c in self.monomials.items()})

    def __repr__(self) -> str:
        parts = [] if self.constant == 0 else [str(self.constant)]
        for vars_, coef in self.terms():
            mono = "*".join(f"x{v}" for v in vars_)
            parts.append(f"{coef}*{mono}" if coef != 1 else mono)
        body = " + ".join(parts) if parts else "0"
        return f"Polynomial({self.n_vars} vars: {body})"


@dataclass(frozen=True)
class PairDecomposition:
    """P = base + x_i*p_i + x_j*p_j + x_i*x_j*p_ij, all parts free of i and j."""

    i: int
    j: int
    base: Polynomial
    p_i: Polynomial
    p_j: Polynomial
    p_ij: Polynomial


def make_polynomial(terms, constant=0, n_vars: int | None = None) -> Polynomial:
    """Canonicalize a term list [(var-set, coef), ...] plus constant.

    Duplicate var-sets are merged, zero coefficients dropped.  A variable
    repeated inside one var-set is an error (the representation is
    multilinear).  When ``n_vars`` is omitted it is inferred as
    1 + max variable index.
    """
    merged: dict[tuple[int, ...], Fraction] = {}
    max_var = -1
    for vars_, coef in terms:
        key = tuple(sorted(int(v) for v in vars_))
        if len(set(key)) != len(key):
            raise PolynomialError(f"duplicate variable in monomial {vars_}")
        if not key:
            raise PolynomialError("empty var-set; fold it into the constant instead")
        if key[0] < 0:
            raise PolynomialError(f"negative variable index in {vars_}")
        max_var = max(max_var, key[-1])
        c = merged.get(key, Fraction(0)) + as_fraction(coef)
        if c:
            merged[key] = c
        else:
            merged.pop(key, None)
    if n_vars is None:
        n_vars = max_var + 1
    elif max_var >= n_vars:
        raise PolynomialError(f"variable {max_var} out of range for n_vars={n_vars}")
    return Polynomial(int(n_vars), as_fraction(constant), merged)


def zero(n_vars: int) -> Polynomial:
    return Polynomial(n_vars)


def normalize_zero(p: Polynomial) -> tuple[Polynomial, Fraction]:
    """Split off the constant so the returned polynomial vanishes at 0."""
    return Polynomial(p.n_vars, Fraction(0), dict(p.monomials)), p.constant


def fix_variables(p: Polynomial, part: PartialAssignment) -> Polynomial:
    """Substitute 0/1 values for some variables.

    The result lives over the same variable indexing; fixed variables simply
    no longer occur.  Evaluating the result on any completion equals
    evaluating ``p`` on the combined assignment.
    """
    for v, b in part.items():
        if not 0 <= v < p.n_vars:
            raise PolynomialError(f"variable {v} out of range")
        if b not in (0, 1):
            raise PolynomialError(f"fixed value for x{v} must be 0 or 1, got {b!r}")
    constant = p.constant
    merged: dict[tuple[int, ...], Fraction] = {}
    for vars_, coef in p.monomials.items():
        kept = []
        dead = False
        for v in vars_:
            if v in part:
                if part[v] == 0:
                    dead = True
                    break
            else:
                kept.append(v)
        if dead:
            continue
        if not kept:
            constant += coef
            continue
        key = tuple(kept)
        c = merged.get(key, Fraction(0)) + coef
        if c:
            merged[key] = c
        else:
            merged.pop(key, None)
    return Polynomial(p.n_vars, constant, merged)


def split_boundary(p: Polynomial, block: Iterable[int]) -> tuple[Polynomial, Polynomial]:
    """Split P into the part touching a variable set and the rest.

    Returns (touching, rest): every monomial of ``touching`` contains at
    least one variable of ``block``; ``rest`` (including the constant) has
    none, so P = touching + rest identically.
    """
    bset = set(block)
    for v in bset:
        if not 0 <= v < p.n_vars:
            raise PolynomialError(f"variable {v} out of range")
    touching: dict[tuple[int, ...], Fraction] = {}
    rest: dict[tuple[int, ...], Fraction] = {}
    for vars_, coef in p.monomials.items():
        (touching if any(v in bset for v in vars_) else rest)[vars_] = coef
    return Polynomial(p.n_vars, Fraction(0), touching), Polynomial(p.n_vars, p.constant, rest)


def pair_decompose(p: Polynomial, i: int, j: int) -> PairDecomposition:
    """Factor P by the presence pattern of two distinct variables."""
    if i == j:
        raise PolynomialError("pair decomposition needs two distinct variables")
    for v in (i, j):
        if not 0 <= v < p.n_vars:
            raise PolynomialError(f"variable {v} out of range")
    parts: dict[tuple[bool, bool], dict[tuple[int, ...], Fraction]] = {
        (False, False): {}, (True, False): {}, (False, True): {}, (True, True): {},
    }
    consts = {k: Fraction(0) for k in parts}
    consts[(False, False)] = p.constant
    for vars_, coef in p.monomials.items():
        has_i = i in vars_
        has_j = j in vars_
        residue = tuple(v for v in vars_ if v != i and v != j)
        if residue:
            parts[(has_i, has_j)][residue] = parts[(has_i, has_j)].get(residue, Fraction(0)) + coef
        else:
            consts[(has_i, has_j)] += coef
    def build(key):
        return Polynomial(p.n_vars, consts[key], {k: c for k, c in parts[key].items() if c})
    return PairDecomposition(
        i=i, j=j,
        base=build((False, False)),
        p_i=build((True, False)),
        p_j=build((False, True)),
        p_ij=build((True, True)),
    )


def nonlinear_part(p: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Split P into (Q, L): monomials of degree >= 2, and linear + constant."""
    quad = {v: c for v, c in p.monomials.items() if len(v) >= 2}
    lin = {v: c for v, c in p.monomials.items() if len(v) == 1}
    return Polynomial(p.n_vars, Fraction(0), quad), Polynomial(p.n_vars, p.constant, lin)


def restrict(p: Polynomial, var_order: Iterable[int]) -> Polynomial:
    """Reindex P onto a dense variable set.

    ``var_order`` lists the variables that become 0..len-1 of the result,
    in that order.  Every variable in P's support must be listed.
    """
    order = list(var_order)
    pos = {v: k for k, v in enumerate(order)}
    if len(pos) != len(order):
        raise PolynomialError("duplicate variable in restriction order")
    merged: dict[tuple[int, ...], Fraction] = {}
    for vars_, coef in p.monomials.items():
        try:
            key = tuple(sorted(pos[v] for v in vars_))
        except KeyError as exc:
            raise PolynomialError(f"variable {exc.args[0]} not covered by restriction") from None
        merged[key] = merged.get(key, Fraction(0)) + coef
    return Polynomial(len(order), p.constant, {k: c for k, c in merged.items() if c})


def to_masks(p: Polynomial) -> tuple[list[int], list[Fraction]]:
    """Monomials as bitmasks (requires n_vars <= 62), deterministic order."""
    if p.n_vars > 62:
        raise PolynomialError("bitmask form needs n_vars <= 62")
    masks, coefs = [], []
    for vars_, coef in p.terms():
        m = 0
        for v in vars_:
            m |= 1 << v
        masks.append(m)
        coefs.append(coef)
    return masks, coefs


def mask_to_assignment(mask: int, n_vars: int) -> Assignment:
    return tuple((mask >> v) & 1 for v in range(n_vars))


def assignment_to_mask(x: Assignment) -> int:
    m = 0
    for v, b in enumerate(x):
        if b:
            m |= 1 << v
    return m


# ---------------------------------------------------------------------------
# JSON text format (used by the CLI):
#   {"n_vars": int, "constant": "p/q", "monomials": [{"vars": [...], "coef": "p/q"}]}


def to_json_dict(p: Polynomial) -> dict:
    return {
        "n_vars": p.n_vars,
        "constant": str(p.constant),
        "monomials": [{"vars": list(v), "coef": str(c)} for v, c in p.terms()],
    }


def from_json_dict(doc: dict) -> Polynomial:
    try:
        terms = [(m["vars"], m["coef"]) for m in doc.get("monomials", [])]
        return make_polynomial(terms, constant=doc.get("constant", 0), n_vars=doc["n_vars"])
    except (KeyError, TypeError, ValueError) as exc:
        raise PolynomialError(f"malformed polynomial document: {exc}") from exc


def dumps(p: Polynomial) -> str:
    return json.dumps(to_json_dict(p), indent=2)


def loads(text: str) -> Polynomial:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolynomialError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise PolynomialError("polynomial document must be a JSON object")
    return from_json_dict(doc)
