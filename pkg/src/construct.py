"""
Two-phase construction: an outer tower of hypersurfaces fixing h^{p,0} mod m,
then scheduled blow-ups fixing the inner Hodge numbers mod m
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from src.blocks import BundleCenterSpec, bundle_center_diamond, curve_diamond, proj_space_diamond
from src.chi import ChiFactor, ChiTable, chi_curve, chi_elliptic, chi_product, hypersurface_table, middle_row_from_chi
from src.diamond import HodgeDiamond, Index, blow_up, inner_order, kunneth, quarter_indices, validate
from src.errors import ConstructionError, DimensionMismatch, HodgeError, IndexOutOfI, MalformedRecipe, OutOfRange
from src.models import (
    BLOWUP_KINDS,
    BlowupBundleStep,
    BlowupPointStep,
    BlowupProjStep,
    CurveStep,
    Recipe,
    RecipeStep,
    ResidueTarget,
    TowerLevelStep,
)

logger = logging.getLogger("hodge_mod.construct")


@dataclass(frozen=True)
class LevelPlan:
    """Choices for one tower level >= 2"""
    level: int
    targets: tuple[int, ...]
    k: tuple[int, ...]
    elliptic_degree: int
    e: int


@dataclass(frozen=True)
class OuterPlan:
    n: int
    m: int
    genus: int
    degree: int
    levels: tuple[LevelPlan, ...]

    def targets(self, level: int) -> tuple[int, ...]:
        """Residues h^{1,0}..h^{level,0} that the given level must hit"""
        if level == 1:
            return (self.genus,)
        return self.levels[level - 2].targets


@dataclass
class LevelState:
    """One tower level X_n together with the chi calculus of its line bundle L_n"""
    dimension: int
    diamond: HodgeDiamond
    table: ChiTable
    previous: "LevelState | None" = None

    def chi_line(self, a: int, k: int) -> int:
        """chi(Omega^a (x) L^{-k})"""
        if self.previous is None:
            return self.table(a, (k,))
        # L_n is the restriction of Q_n
        return self.table(a, (0, k))


@dataclass(frozen=True)
class IncrSchedule:
    """Increment counts t_{p,q}, in processing (descending) order"""
    entries: tuple[tuple[Index, int], ...]

    def total(self) -> int:
        return sum(t for _, t in self.entries)


def elliptic_degree(m: int) -> int:
    """Least d >= 3 with d = 1 mod m"""
    d = 3
    while (d - 1) % m:
        d += 1
    return d


def curve_degree(g: int, m: int) -> int:
    """Least d > 2g with d = -g mod m"""
    d = 2 * g + 1
    while (d + g) % m:
        d += 1
    return d


def plan_outer(n: int, m: int, outer: Sequence[int]) -> OuterPlan:
    if m < 2 or n < 1:
        raise OutOfRange(f"need n >= 1 and m >= 2, got n={n}, m={m}")
    if len(outer) != n:
        raise OutOfRange(f"expected {n} outer residues, got {len(outer)}")

    d_E = elliptic_degree(m)
    targets = tuple(v % m for v in outer)
    levels = []
    for level in range(n, 1, -1):
        k = [0, 1]
        for p in range(1, level):
            k.append(targets[p - 1] - 2 * k[-1] - k[-2])
        e = (1 + sum((-1) ** p * targets[p - 1] for p in range(1, level + 1))) % m or m
        levels.append(LevelPlan(level, targets, tuple(k[2:]), d_E, e))
        targets = tuple(v % m for v in k[2:])

    genus = targets[0]
    plan = OuterPlan(n, m, genus, curve_degree(genus, m), tuple(reversed(levels)))
    logger.info(
        f"Outer plan n={n} m={m}: curve g={plan.genus} d={plan.degree}, "
        f"d_E={d_E}, e={[lv.e for lv in plan.levels]}"
    )
    return plan


def curve_level(genus: int, degree: int) -> LevelState:
    table = ChiTable("X_1", 1, lambda _, a, twist: chi_curve(genus, degree, a, twist[0]))
    return LevelState(1, curve_diamond(genus), table)


def next_level(previous: LevelState, m: int, d_E: int, e: int) -> LevelState:
    """X_n in X_{n-1} x E x E cut out by P_n = L_{n-1} (x) L^{m-1} (x) L^e.

    Twists (i, j) stand for P_n^{-i} (x) Q_n^{-j}, Q_n = L_{n-1} (x) L (x) L.
    """
    n = previous.dimension + 1
    base = ChiFactor(previous.dimension, previous.chi_line)
    elliptic = ChiFactor(1, lambda a, t: chi_elliptic(d_E, a, t))

    def ambient(a: int, twist: tuple[int, ...]) -> int:
        i, j = twist
        return chi_product([base, elliptic, elliptic], a, [i + j, i * (m - 1) + j, i * e + j])

    table = hypersurface_table(f"X_{n}", ambient, n + 1, (1, 0))

    E = curve_diamond(1)
    product_diamond = kunneth(kunneth(previous.diamond, E), E)
    # Lefschetz below the middle row, Serre duality above it
    known = [
        [
            product_diamond.entry(p, q) if p + q < n else product_diamond.entry(n - p, n - q)
            for q in range(n + 1)
        ]
        for p in range(n + 1)
    ]
    middle = middle_row_from_chi(n, known, [table(p, (0, 0)) for p in range(n + 1)])
    for p in range(n + 1):
        known[p][n - p] = middle[p]

    state = LevelState(n, HodgeDiamond.from_rows(known), table, previous)
    logger.debug(f"Tower level {n}: middle row {middle}, {table!r}")
    return state


def check_level(state: LevelState, targets: Sequence[int], m: int, e: int | None = None) -> list[str]:
    """Outer congruences a tower level must satisfy"""
    problems = validate(state.diamond)
    for p, target in enumerate(targets, start=1):
        if (state.diamond.entry(p, 0) - target) % m:
            problems.append(f"h{p}0")
    if state.chi_line(0, 1) % m != 1:
        problems.append("chi(L^-1)")
    if e is not None and (state.chi_line(0, 0) - e) % m:
        problems.append("chi(O)")
    return problems


def build_tower(plan: OuterPlan) -> LevelState:
    state = curve_level(plan.genus, plan.degree)
    checks = [(state, plan.targets(1), None)]
    for level in plan.levels:
        state = next_level(state, plan.m, level.elliptic_degree, level.e)
        checks.append((state, level.targets, level.e))

    for level_state, targets, e in checks:
        problems = check_level(level_state, targets, plan.m, e)
        if problems:
            logger.error(f"Tower level {level_state.dimension} failed checks: {problems}")
            raise ConstructionError(f"tower level {level_state.dimension} violates {problems}")
    return state


def tower_steps(plan: OuterPlan) -> list[RecipeStep]:
    steps: list[RecipeStep] = [CurveStep(genus=plan.genus, degree=plan.degree)]
    steps.extend(TowerLevelStep(elliptic_degree=lv.elliptic_degree, e=lv.e) for lv in plan.levels)
    return steps


def step_center(step: RecipeStep, n: int) -> tuple[HodgeDiamond, int]:
    """Blow-up center of a step and its codimension"""
    if isinstance(step, BlowupPointStep):
        return HodgeDiamond.point(), n
    if isinstance(step, BlowupProjStep):
        return proj_space_diamond(step.s), n - step.s
    if isinstance(step, BlowupBundleStep):
        return bundle_center_diamond(BundleCenterSpec(step.r, step.s, step.d)), n - step.s + 1
    raise MalformedRecipe(f"step {step.kind} is not a blow-up")


def apply_step(diamond: HodgeDiamond, step: RecipeStep) -> HodgeDiamond:
    center, c = step_center(step, diamond.n)
    return blow_up(diamond, center, c)


def create_subvarieties(diamond: HodgeDiamond, rank: int, base: int, m: int) -> tuple[HodgeDiamond, list[RecipeStep]]:
    """m disjoint P^rank-bundles over P^base: m rounds of point then P^base blow-ups"""
    if rank < 0 or base < 0 or rank + base > diamond.n - 1:
        raise OutOfRange(f"need rank + base <= {diamond.n - 1}, got rank={rank}, base={base}")
    steps: list[RecipeStep] = []
    for _ in range(m):
        steps.append(BlowupPointStep())
        steps.append(BlowupProjStep(s=base))
    for step in steps:
        diamond = apply_step(diamond, step)
    return diamond, steps


def apply_incr(diamond: HodgeDiamond, r: int, s: int, m: int) -> tuple[HodgeDiamond, list[RecipeStep]]:
    """Raise l^{r,s} by 1 mod m, leaving every l^{p,q} with (r,s) before (p,q) fixed mod m"""
    if (r, s) not in inner_order(diamond.n):
        raise IndexOutOfI(f"({r},{s}) is not an inner index for dimension {diamond.n}")

    diamond, steps = create_subvarieties(diamond, r - 1, s - r + 1, m)
    bundles = [BlowupBundleStep(r=r, s=s, d=s - r + 2)]
    bundles.extend(BlowupBundleStep(r=r, s=s, d=1) for _ in range(m - 1))
    for step in bundles:
        diamond = apply_step(diamond, step)
    return diamond, steps + bundles


def _descend(diamond: HodgeDiamond, target: ResidueTarget) -> tuple[IncrSchedule, HodgeDiamond, list[RecipeStep]]:
    if diamond.n != target.n:
        raise DimensionMismatch(f"diamond has dimension {diamond.n}, target {target.n}")
    m, entries, steps = target.m, [], []
    for p, q in inner_order(diamond.n).descending():
        current = diamond.entry(p, q) - diamond.entry(p - 1, q - 1)
        t = (target.primitive(p, q) - current) % m
        for _ in range(t):
            diamond, incr = apply_incr(diamond, p, q, m)
            steps.extend(incr)
        entries.append(((p, q), t))
        logger.debug(f"Inner index ({p},{q}): t={t}")
    return IncrSchedule(tuple(entries)), diamond, steps


def schedule_inner(diamond: HodgeDiamond, target: ResidueTarget) -> IncrSchedule:
    schedule, _, _ = _descend(diamond, target)
    return schedule


def construct_inner(diamond: HodgeDiamond, target: ResidueTarget) -> tuple[HodgeDiamond, list[RecipeStep]]:
    """Adjust the inner residues of any diamond by blow-ups alone"""
    _, diamond, steps = _descend(diamond, target)
    return diamond, steps


def verify_congruence(diamond: HodgeDiamond, target: ResidueTarget) -> list[str]:
    if diamond.n != target.n:
        return ["dimension"]
    return [
        f"h({p},{q})"
        for p, q, v in diamond.items()
        if (v - target.residue(p, q)) % target.m
    ]


def construct(target: ResidueTarget) -> tuple[Recipe, HodgeDiamond]:
    plan = plan_outer(target.n, target.m, target.outer())
    top = build_tower(plan)
    schedule, diamond, steps = _descend(top.diamond, target)
    recipe = Recipe(n=target.n, m=target.m, steps=tuple(tower_steps(plan) + steps))

    problems = verify_congruence(diamond, target) + validate(diamond)
    if problems:
        logger.error(f"Construction for n={target.n} m={target.m} failed: {problems}")
        raise ConstructionError(f"constructed diamond violates {problems}")
    logger.info(f"Constructed n={target.n} m={target.m} with {schedule.total()} increments, {len(recipe.steps)} steps")
    return recipe, diamond


def check_recipe(recipe: Recipe) -> None:
    steps = recipe.steps
    if not steps or not isinstance(steps[0], CurveStep):
        raise MalformedRecipe("recipe must start with a curve step")
    seen_blowup = False
    for position, step in enumerate(steps, start=1):
        if isinstance(step, CurveStep) and position != 1:
            raise MalformedRecipe(f"step {position}: more than one curve step")
        if isinstance(step, TowerLevelStep) and seen_blowup:
            raise MalformedRecipe(f"step {position}: tower level after a blow-up")
        seen_blowup = seen_blowup or step.kind in BLOWUP_KINDS
        if isinstance(step, (BlowupProjStep, BlowupBundleStep)) and step.s > recipe.n - 1:
            raise MalformedRecipe(f"step {position}: s={step.s} exceeds {recipe.n - 1}")
    levels = 1 + sum(isinstance(step, TowerLevelStep) for step in steps)
    if levels != recipe.n:
        raise MalformedRecipe(f"recipe builds dimension {levels}, header says {recipe.n}")


def eval_recipe(recipe: Recipe) -> HodgeDiamond:
    check_recipe(recipe)
    curve = recipe.steps[0]
    state = curve_level(curve.genus, curve.degree)
    diamond = state.diamond
    for step in recipe.steps[1:]:
        if isinstance(step, TowerLevelStep):
            state = next_level(state, recipe.m, step.elliptic_degree, step.e)
            diamond = state.diamond
        else:
            diamond = apply_step(diamond, step)
    return diamond


def enumerate_targets(n: int, m: int) -> Iterator[ResidueTarget]:
    """All targets, lexicographic over the quarter indices other than (0,0)"""
    free = [pq for pq in quarter_indices(n) if pq != (0, 0)]
    for values in product(range(m), repeat=len(free)):
        yield ResidueTarget(n=n, m=m, residues=dict(zip(free, values)))


def check_target(target: ResidueTarget) -> str | None:
    """None when construct and an independent re-evaluation both verify"""
    try:
        recipe, diamond = construct(target)
    except HodgeError as e:
        return str(e)
    if eval_recipe(recipe) != diamond:
        return "re-evaluation differs"
    return None
