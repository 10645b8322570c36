"""
Twisted Euler characteristics chi(Omega^a (x) M)

Twists are anti-ample: a TwistIndex (i, j, ...) stands for the tensor product of
the inverse powers G_1^{-i} (x) G_2^{-j} (x) ... of the generators of a
variety's twist lattice.
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

from src.errors import InconsistentChi, OutOfRange

logger = logging.getLogger("hodge_mod.chi")

TwistIndex = tuple[int, ...]
ChiOracle = Callable[[int, TwistIndex], int]


def binom_int(n: int, k: int) -> int:
    """Binomial C(n, k) for integer n and k >= 0, as a polynomial in n.

    Negative n uses C(n, k) = (-1)^k * C(k - n - 1, k).
    """
    if k < 0:
        raise OutOfRange("k must be non-negative")
    if k == 0:
        return 1
    if n < 0:
        return (-1) ** k * binom_int(k - n - 1, k)
    if k > n:
        return 0
    result = 1
    for i in range(1, k + 1):
        result = result * (n - i + 1) // i
    return result


def chi_proj(N: int, a: int, t: int) -> int:
    """chi(P^N, Omega^a(t)) via the Euler sequence"""
    if not 0 <= a <= N:
        raise OutOfRange(f"form degree {a} outside 0..{N}")
    value = binom_int(t + N, N)
    for b in range(1, a + 1):
        value = binom_int(N + 1, b) * binom_int(t - b + N, N) - value
    return value


def chi_curve(g: int, d: int, a: int, k: int) -> int:
    """chi(C, Omega^a (x) L^{-k}) on a genus-g curve with deg L = d"""
    if a == 0:
        return 1 - g - k * d
    if a == 1:
        return g - 1 - k * d
    raise OutOfRange(f"form degree {a} outside 0..1")


def chi_elliptic(d: int, a: int, t: int) -> int:
    """chi(E, Omega^a (x) L^{-t}) with deg L = d; the canonical bundle is trivial"""
    if a not in (0, 1):
        raise OutOfRange(f"form degree {a} outside 0..1")
    return -t * d


@dataclass(frozen=True)
class ChiFactor:
    """One factor of a product: its dimension and chi(Omega^a (x) L^{-t})"""
    dimension: int
    chi: Callable[[int, int], int]


def chi_product(factors: Sequence[ChiFactor], p: int, twists: Sequence[int]) -> int:
    """Kunneth: sum over a_1+...+a_k = p of prod chi_i(a_i, twist_i)"""
    total = 0
    for degrees in product(*(range(f.dimension + 1) for f in factors)):
        if sum(degrees) != p:
            continue
        term = 1
        for factor, a, t in zip(factors, degrees, twists):
            term *= factor.chi(a, t)
            if not term:
                break
        total += term
    return total


def shift(twist: TwistIndex, divisor: TwistIndex) -> TwistIndex:
    """M (x) divisor^{-1} in exponent form"""
    return tuple(i + j for i, j in zip(twist, divisor))


class ChiTable:
    """Memoized chi(Omega^a (x) M) for one variety"""

    def __init__(self, owner: str, dimension: int, compute: Callable[["ChiTable", int, TwistIndex], int]):
        self.owner = owner
        self.dimension = dimension
        self._compute = compute
        self.memo: dict[tuple[int, TwistIndex], int] = {}
        self.hits = 0
        self.misses = 0

    def __call__(self, a: int, twist: TwistIndex) -> int:
        if a < 0 or a > self.dimension:
            return 0
        twist = tuple(twist)
        if any(e < 0 for e in twist):
            raise OutOfRange(f"twist {twist} has a negative exponent")
        key = (a, twist)
        if key in self.memo:
            self.hits += 1
            return self.memo[key]
        self.misses += 1
        value = self._compute(self, a, twist)
        self.memo[key] = value
        return value

    def __len__(self) -> int:
        return len(self.memo)

    def __repr__(self) -> str:
        return f"ChiTable({self.owner}, entries={len(self.memo)}, hits={self.hits}, misses={self.misses})"


def hypersurface_table(owner: str, ambient: ChiOracle, ambient_dim: int, divisor: TwistIndex) -> ChiTable:
    """ChiTable of a very ample hypersurface in an ambient variety.

    Restriction and the conormal sequence give
    T(a, M) = [chi_W(Omega^a M) - chi_W(Omega^a M(-D))] - T(a-1, M(-D)).
    """
    def compute(table: ChiTable, a: int, twist: TwistIndex) -> int:
        lowered = shift(twist, divisor)
        return ambient(a, twist) - ambient(a, lowered) - table(a - 1, lowered)

    return ChiTable(owner, ambient_dim - 1, compute)


def chi_hypersurface(ambient: ChiOracle, ambient_dim: int, divisor: TwistIndex, a: int, twist: TwistIndex) -> int:
    """One-off chi(Omega^a (x) M) on a hypersurface"""
    if not 0 <= a <= ambient_dim - 1:
        raise OutOfRange(f"form degree {a} outside 0..{ambient_dim - 1}")
    return hypersurface_table("hypersurface", ambient, ambient_dim, divisor)(a, twist)


def middle_row_from_chi(n: int, known: Sequence[Sequence[int]], chis: Sequence[int]) -> tuple[int, ...]:
    """Solve chi_p = sum_q (-1)^q h[p][q] for the entries h[p][n-p].

    known holds every entry off the middle antidiagonal; its middle entries are ignored.
    """
    row = []
    for p in range(n + 1):
        rest = sum((-1) ** q * known[p][q] for q in range(n + 1) if q != n - p)
        row.append((-1) ** (n - p) * (chis[p] - rest))
    if any(v < 0 for v in row) or any(row[p] != row[n - p] for p in range(n + 1)):
        raise InconsistentChi(f"reconstructed middle row {row} is not a Hodge row")
    return tuple(row)
