"""
Refuting polynomial relations among Hodge numbers.

A nonzero integer polynomial f in the quarter-diamond entries is evaluated at
a lattice point z with f(z) != 0; for a modulus m not dividing f(z) a variety
with h = z (mod m) is constructed, so f does not vanish on its diamond.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import count, product
from math import prod
from typing import Iterable, Mapping

import sympy

from src.construct import construct, eval_recipe
from src.diamond import HodgeDiamond, Index, quarter_indices, quarter_representative, validate
from src.errors import ConstructionError, OutOfRange, ZeroPolynomial
from src.models import Recipe, ResidueTarget

logger = logging.getLogger("hodge_mod.relations")


@dataclass(frozen=True)
class PolynomialRelation:
    """Integer polynomial in the variables h^{p,q}, one per quarter index"""
    n: int
    inner: bool
    variables: tuple[Index, ...]
    poly: sympy.Poly

    @property
    def N(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return self.poly.is_zero

    def evaluate(self, values: Mapping[Index, int]) -> int:
        point = [int(values[v]) for v in self.variables]
        return sum(
            int(coeff) * prod(x ** e for x, e in zip(point, monom))
            for monom, coeff in self.poly.terms()
        )

    def monomials(self) -> list[tuple[int, dict[Index, int]]]:
        return [
            (int(coeff), {v: e for v, e in zip(self.variables, monom) if e})
            for monom, coeff in self.poly.terms()
        ]


@dataclass(frozen=True)
class RefutationCertificate:
    witness: dict[Index, int]
    witness_value: int
    modulus: int
    recipe: Recipe
    diamond: HodgeDiamond
    diamond_value: int


def relation_variables(n: int, inner: bool = False) -> list[Index]:
    if inner:
        return [(p, q) for p, q in quarter_indices(n) if p >= 1]
    return [pq for pq in quarter_indices(n) if pq != (0, 0)]


def normalise_variable(n: int, p: int, q: int, inner: bool = False) -> Index:
    index = quarter_representative(n, p, q)
    if index == (0, 0):
        raise OutOfRange(f"h^{p},{q} is always 1 and cannot be a variable")
    if inner and index[0] == 0:
        raise OutOfRange(f"h^{p},{q} is an outer Hodge number")
    return index


def make_relation(n: int, terms: Iterable[tuple[int | str | Fraction, Mapping[Index, int]]], inner: bool = False) -> PolynomialRelation:
    """Combine like terms and clear rational denominators"""
    variables = relation_variables(n, inner)
    if not variables:
        raise OutOfRange(f"dimension {n} has no {'inner ' if inner else ''}Hodge numbers to relate")
    symbols = {v: sympy.Symbol(f"h_{v[0]}_{v[1]}") for v in variables}

    expr = sympy.Integer(0)
    for coefficient, powers in terms:
        c = Fraction(coefficient)
        monomial = sympy.Rational(c.numerator, c.denominator)
        for (p, q), e in powers.items():
            if e < 0:
                raise OutOfRange(f"negative exponent {e}")
            monomial *= symbols[normalise_variable(n, p, q, inner)] ** e
        expr += monomial

    poly = sympy.Poly(expr, *symbols.values(), domain="QQ")
    _, poly = poly.clear_denoms(convert=True)
    return PolynomialRelation(n, inner, tuple(variables), poly)


def find_witness(f: PolynomialRelation, box: int = 1) -> dict[Index, int]:
    """First point of [0,B]^N with f != 0, doubling B; the first variable varies fastest"""
    if f.is_zero():
        raise ZeroPolynomial("polynomial has no nonzero monomial")
    bound = max(1, box)
    while True:
        for point in product(range(bound + 1), repeat=f.N):
            z = dict(zip(f.variables, reversed(point)))
            if f.evaluate(z):
                return z
        bound *= 2


def smallest_non_divisor(value: int) -> int:
    return next(k for k in count(2) if value % k)


def refute(f: PolynomialRelation) -> RefutationCertificate:
    z = find_witness(f)
    fz = f.evaluate(z)
    m = smallest_non_divisor(fz)
    logger.info(f"Refuting relation in dimension {f.n}: f(z)={fz}, modulus {m}")

    residues = {v: z[v] % m for v in f.variables}
    recipe, diamond = construct(ResidueTarget(n=f.n, m=m, residues=residues))

    values = {v: diamond.entry(*v) for v in f.variables}
    if any((values[v] - z[v]) % m for v in f.variables):
        raise ConstructionError("constructed diamond does not reduce to the witness")
    value = f.evaluate(values)
    if value % m == 0:
        raise ConstructionError(f"f vanishes mod {m} on the constructed diamond")
    return RefutationCertificate(z, fz, m, recipe, diamond, value)


def verify_certificate(f: PolynomialRelation, certificate: RefutationCertificate) -> bool:
    """Re-evaluate the recipe and the polynomial from scratch"""
    m = certificate.modulus
    diamond = eval_recipe(certificate.recipe)
    values = {v: diamond.entry(*v) for v in f.variables}
    checks = [
        m >= 2,
        f.evaluate(certificate.witness) % m != 0,
        all((values[v] - certificate.witness[v]) % m == 0 for v in f.variables),
        f.evaluate(values) == certificate.diamond_value,
        certificate.diamond_value % m != 0,
        not validate(diamond),
    ]
    if not all(checks):
        logger.error(f"Certificate failed re-verification: {checks}")
    return all(checks)
