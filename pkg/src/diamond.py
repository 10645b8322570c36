"""
Hodge diamond value type and the combinatorial operations on it
"""
import logging
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from src.errors import DimensionMismatch, OutOfRange

logger = logging.getLogger("hodge_mod.diamond")

Index = tuple[int, int]


@dataclass(frozen=True)
class HodgeDiamond:
    """Exact (n+1)x(n+1) grid of Hodge numbers h[p][q]"""
    n: int
    h: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 0:
            raise OutOfRange(f"dimension must be nonnegative, got {self.n}")
        if len(self.h) != self.n + 1 or any(len(row) != self.n + 1 for row in self.h):
            raise OutOfRange(f"grid must be {self.n + 1}x{self.n + 1}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "HodgeDiamond":
        return cls(len(rows) - 1, tuple(tuple(int(v) for v in row) for row in rows))

    @classmethod
    def zero(cls, n: int) -> "HodgeDiamond":
        return cls(n, tuple((0,) * (n + 1) for _ in range(n + 1)))

    @classmethod
    def point(cls) -> "HodgeDiamond":
        return cls(0, ((1,),))

    def entry(self, p: int, q: int) -> int:
        """h[p][q], reading out-of-range indices as 0"""
        if 0 <= p <= self.n and 0 <= q <= self.n:
            return self.h[p][q]
        return 0

    def __getitem__(self, index: Index) -> int:
        p, q = index
        return self.entry(p, q)

    def items(self) -> Iterator[tuple[int, int, int]]:
        for p in range(self.n + 1):
            for q in range(self.n + 1):
                yield p, q, self.h[p][q]

    def betti(self) -> list[int]:
        """Row sums b_k = sum over p+q=k"""
        b = [0] * (2 * self.n + 1)
        for p, q, v in self.items():
            b[p + q] += v
        return b

    def euler(self) -> int:
        """Topological Euler characteristic"""
        return sum((-1) ** k * b for k, b in enumerate(self.betti()))

    def holomorphic_euler(self, p: int) -> int:
        """chi_p = sum_q (-1)^q h[p][q]"""
        return sum((-1) ** q * self.entry(p, q) for q in range(self.n + 1))

    def __add__(self, other: "HodgeDiamond") -> "HodgeDiamond":
        if other.n != self.n:
            raise DimensionMismatch(f"cannot add diamonds of dimension {self.n} and {other.n}")
        return HodgeDiamond(self.n, tuple(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.h, other.h)
        ))

    def __sub__(self, other: "HodgeDiamond") -> "HodgeDiamond":
        if other.n != self.n:
            raise DimensionMismatch(f"cannot subtract diamonds of dimension {self.n} and {other.n}")
        return HodgeDiamond(self.n, tuple(
            tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.h, other.h)
        ))

    def reduce(self, m: int) -> "HodgeDiamond":
        """Entrywise least nonnegative residues modulo m"""
        return HodgeDiamond(self.n, tuple(tuple(v % m for v in row) for row in self.h))


@dataclass(frozen=True)
class PrimitiveVector:
    """Primitive Hodge numbers l[p][q] = h[p][q] - h[p-1][q-1] for p+q <= n"""
    n: int
    l: dict[Index, int] = field(hash=False)

    def __getitem__(self, index: Index) -> int:
        return self.l[index]


@dataclass(frozen=True)
class InnerIndexSet:
    """Inner index pairs sorted ascending by the precedence order"""
    n: int
    indices: tuple[Index, ...]

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[Index]:
        return iter(self.indices)

    def __contains__(self, index: object) -> bool:
        return index in self.indices

    def descending(self) -> tuple[Index, ...]:
        return tuple(reversed(self.indices))


def quarter_indices(n: int) -> list[Index]:
    """Non-redundant quarter 0 <= p <= q <= n, p+q <= n, ascending"""
    return [(p, q) for p in range(n + 1) for q in range(p, n + 1) if p + q <= n]


def quarter_representative(n: int, p: int, q: int) -> Index:
    """Map (p, q) to its quarter representative under the Hodge symmetries"""
    if not (0 <= p <= n and 0 <= q <= n):
        raise OutOfRange(f"index ({p},{q}) outside a dimension-{n} diamond")
    if p > q:
        p, q = q, p
    if p + q > n:
        p, q = n - q, n - p
    return p, q


def validate(diamond: HodgeDiamond, connected: bool = True) -> list[str]:
    """Return the violated Hodge constraints; empty means valid"""
    n, violations = diamond.n, []
    if connected and diamond.entry(0, 0) != 1:
        violations.append("h00")
    for p, q, v in diamond.items():
        if v < 0:
            violations.append(f"negative({p},{q})")
        if v != diamond.entry(q, p) and p < q:
            violations.append(f"symmetry({p},{q})~({q},{p})")
        if v != diamond.entry(n - p, n - q) and (p, q) < (n - p, n - q):
            violations.append(f"symmetry({p},{q})~({n - p},{n - q})")
        if p + q < n and v > diamond.entry(p + 1, q + 1):
            violations.append(f"lefschetz({p},{q})")
    return violations


def kunneth(first: HodgeDiamond, second: HodgeDiamond) -> HodgeDiamond:
    """Hodge diamond of a product: convolution of the two grids"""
    n = first.n + second.n
    grid = [[0] * (n + 1) for _ in range(n + 1)]
    for a, b, x in first.items():
        if not x:
            continue
        for c, d, y in second.items():
            grid[a + c][b + d] += x * y
    return HodgeDiamond.from_rows(grid)


def blow_up(diamond: HodgeDiamond, center: HodgeDiamond, c: int) -> HodgeDiamond:
    """Diamond of the blow-up along a center of codimension c.

    h[p][q] += sum_{i=1}^{c-1} center[p-i][q-i]
    """
    n = diamond.n
    if not 1 <= c <= n:
        raise OutOfRange(f"codimension {c} outside 1..{n}")
    if center.n != n - c:
        raise DimensionMismatch(
            f"center of dimension {center.n} cannot have codimension {c} in dimension {n}"
        )
    grid = [list(row) for row in diamond.h]
    for i in range(1, c):
        for p, q, v in center.items():
            grid[p + i][q + i] += v
    return HodgeDiamond.from_rows(grid)


def primitive(diamond: HodgeDiamond) -> PrimitiveVector:
    n = diamond.n
    l = {
        (p, q): diamond.entry(p, q) - diamond.entry(p - 1, q - 1)
        for p in range(n + 1) for q in range(n + 1) if p + q <= n
    }
    return PrimitiveVector(n, l)


def reconstruct(vector: PrimitiveVector, outer: Sequence[int]) -> dict[Index, int]:
    """Rebuild h[p][q] for p <= q, p+q <= n from l and the outer row h[0][k]"""
    return {
        (p, q): outer[q - p] + sum(vector.l[(i, q - p + i)] for i in range(1, p + 1))
        for p, q in quarter_indices(vector.n)
    }


def precedes(first: Index, second: Index) -> bool:
    """(r,s) precedes (p,q) iff r+s < p+q, or equal sums and s < q"""
    (r, s), (p, q) = first, second
    return r + s < p + q or (r + s == p + q and s < q)


def inner_order(n: int) -> InnerIndexSet:
    indices = [(p, q) for p in range(1, n) for q in range(p, n) if p + q <= n]
    indices.sort(key=lambda pq: (pq[0] + pq[1], pq[1]))
    return InnerIndexSet(n, tuple(indices))
