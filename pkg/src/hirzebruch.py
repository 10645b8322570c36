"""
Independent oracle for hypersurface Hodge numbers.

Coefficient extraction from Hirzebruch's generating function

    H(a, b) = 1/((1+a)(1+b)) * [((1+a)^d - (1+b)^d) / (a(1+b)^d - b(1+a)^d) - 1] + 1/(1-ab)

whose a^p b^q coefficient with p+q = N is h^{p,q} of a smooth degree-d
hypersurface of dimension N. Shares no code with the chi calculus.
"""
import logging
from functools import lru_cache

import sympy

logger = logging.getLogger("hodge_mod.hirzebruch")

_a, _b, _x, _u, _v = sympy.symbols("a b x u v")


@lru_cache(maxsize=None)
def oracle_middle_row(N: int, d: int) -> tuple[int, ...]:
    """Middle row h[p][N-p], p = 0..N, of Y_d in P^{N+1}"""
    if N == 0:
        return (d,)
    ratio = sympy.cancel(
        ((1 + _a) ** d - (1 + _b) ** d) / (_a * (1 + _b) ** d - _b * (1 + _a) ** d)
    )
    generating = (ratio - 1) / ((1 + _a) * (1 + _b)) + 1 / (1 - _a * _b)
    homogenised = generating.subs({_a: _x * _u, _b: _x * _v})
    series = sympy.series(homogenised, _x, 0, N + 1).removeO()
    weight = sympy.Poly(sympy.expand(series.coeff(_x, N)), _u, _v)
    row = tuple(int(weight.coeff_monomial(_u ** p * _v ** (N - p))) for p in range(N + 1))
    logger.debug(f"oracle Y_{d}, N={N}: {row}")
    return row


def oracle_diamond_rows(N: int, d: int) -> list[list[int]]:
    """Full grid: projective-space pattern off the middle row"""
    rows = [[int(p == q and p + q != N) for q in range(N + 1)] for p in range(N + 1)]
    for p, value in enumerate(oracle_middle_row(N, d)):
        rows[p][N - p] = value
    return rows


def hypersurface_euler(N: int, d: int) -> int:
    """Topological Euler characteristic of Y_d in P^{N+1}"""
    return ((1 - d) ** (N + 2) - 1) // d + N + 2
