"""
Exact Hodge diamonds of the building blocks: points, projective spaces, curves,
smooth hypersurfaces Y_d and the projective-bundle blow-up centers B_d
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

from src.chi import ChiTable, binom_int, chi_proj, hypersurface_table, middle_row_from_chi
from src.diamond import HodgeDiamond, kunneth
from src.errors import InconsistentChi, OutOfRange

logger = logging.getLogger("hodge_mod.blocks")


@dataclass(frozen=True)
class HypersurfaceSpec:
    """Smooth Y_d of dimension N in P^{N+1}; N = 0 means d points in P^1"""
    N: int
    d: int

    def __post_init__(self):
        if self.N < 0 or self.d < 1:
            raise OutOfRange(f"hypersurface needs N >= 0 and d >= 1, got N={self.N}, d={self.d}")


@dataclass(frozen=True)
class BundleCenterSpec:
    """B_d: a P^{r-1}-bundle over Y_d in P^{s-r+1}, of dimension s-1"""
    r: int
    s: int
    d: int

    def __post_init__(self):
        if not 1 <= self.r <= self.s:
            raise OutOfRange(f"bundle center needs 1 <= r <= s, got r={self.r}, s={self.s}")
        if self.d < 1:
            raise OutOfRange(f"degree must be positive, got {self.d}")

    @property
    def dimension(self) -> int:
        return self.s - 1


@dataclass(frozen=True)
class FormalCenter:
    """Z x P^{r-1} where Z = Y_{s-r+2} - Y_1 lives on the middle row"""
    r: int
    s: int
    z: HodgeDiamond
    diamond: HodgeDiamond


def proj_space_diamond(s: int) -> HodgeDiamond:
    if s < 0:
        raise OutOfRange(f"projective space dimension must be nonnegative, got {s}")
    return HodgeDiamond.from_rows([[int(p == q) for q in range(s + 1)] for p in range(s + 1)])


def curve_diamond(genus: int) -> HodgeDiamond:
    return HodgeDiamond.from_rows([[1, genus], [genus, 1]])


def projective_chi_table(spec: HypersurfaceSpec) -> ChiTable:
    """ChiTable of Y_d with the single generator O(d): twist (i,) means O(-i*d)"""
    ambient_dim = spec.N + 1

    def ambient(a: int, twist: tuple[int, ...]) -> int:
        return chi_proj(ambient_dim, a, -spec.d * twist[0])

    return hypersurface_table(f"Y_{spec.d} in P^{ambient_dim}", ambient, ambient_dim, (1,))


@lru_cache(maxsize=None)
def hypersurface_diamond(spec: HypersurfaceSpec) -> HodgeDiamond:
    N, d = spec.N, spec.d
    table = projective_chi_table(spec)
    known = [[int(p == q and p + q != N) for q in range(N + 1)] for p in range(N + 1)]
    middle = middle_row_from_chi(N, known, [table(p, (0,)) for p in range(N + 1)])
    for p in range(N + 1):
        known[p][N - p] = middle[p]
    diamond = HodgeDiamond.from_rows(known)

    expected = d if N == 0 else binom_int(d - 1, N + 1)
    if diamond.entry(N, 0) != expected:
        raise InconsistentChi(f"h^{N},0 of Y_{d} is {diamond.entry(N, 0)}, expected {expected}")
    logger.debug(f"Y_{d} in P^{N + 1}: middle row {middle}")
    return diamond


def bundle_center_diamond(spec: BundleCenterSpec) -> HodgeDiamond:
    base = hypersurface_diamond(HypersurfaceSpec(spec.s - spec.r, spec.d))
    return kunneth(base, proj_space_diamond(spec.r - 1))


def formal_center(r: int, s: int) -> FormalCenter:
    if not 1 <= r <= s:
        raise OutOfRange(f"formal center needs 1 <= r <= s, got r={r}, s={s}")
    N = s - r
    z = hypersurface_diamond(HypersurfaceSpec(N, N + 2)) - hypersurface_diamond(HypersurfaceSpec(N, 1))
    return FormalCenter(r, s, z, kunneth(z, proj_space_diamond(r - 1)))
