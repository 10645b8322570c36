import random

import pytest

from src.blocks import formal_center
from src.construct import (
    apply_incr,
    build_tower,
    check_level,
    check_recipe,
    check_target,
    construct,
    construct_inner,
    create_subvarieties,
    curve_degree,
    elliptic_degree,
    enumerate_targets,
    eval_recipe,
    plan_outer,
    schedule_inner,
    verify_congruence,
)
from src.diamond import HodgeDiamond, blow_up, inner_order, precedes, primitive, quarter_indices, validate
from src.errors import ConstructionError, InconsistentChi, IndexOutOfI, MalformedRecipe, OutOfRange
from src.formats import format_diamond, format_recipe, parse_recipe
from src.models import BlowupPointStep, CurveStep, Recipe, ResidueTarget, TowerLevelStep


def _random_outer(rng, n, m):
    return [rng.randrange(m) for _ in range(n)]


def _primitive_delta(before, after):
    l0, l1 = primitive(before), primitive(after)
    return {pq: l1[pq] - l0[pq] for pq in l0.l}


@pytest.mark.unit
class TestOuterPlan:
    """Tests for the outer planner"""

    def test_elliptic_degree(self):
        """Test the least d >= 3 with d = 1 mod m"""
        assert elliptic_degree(2) == 3
        assert elliptic_degree(3) == 4
        assert elliptic_degree(5) == 6

    def test_curve_degree(self):
        """Test the least d > 2g with d = -g mod m"""
        assert curve_degree(2, 5) == 8
        assert curve_degree(0, 2) == 2

    def test_curve_plan(self):
        """Test the plan for n=1, m=5, h10=2"""
        plan = plan_outer(1, 5, [2])
        assert (plan.genus, plan.degree) == (2, 8)
        assert plan.levels == ()

    def test_surface_plan(self):
        """Test the choices for n=2, m=3, outer residues (0, 1)"""
        plan = plan_outer(2, 3, [0, 1])
        assert (plan.genus, plan.degree) == (1, 5)
        assert plan.levels[0].e == 2
        assert plan.levels[0].elliptic_degree == 4

    def test_k_recursion(self):
        """Test k = (-1, 1) for n=3 with outer residues (1, 0, *)"""
        plan = plan_outer(3, 7, [1, 0, 4])
        top = plan.levels[-1]
        assert top.level == 3
        assert top.k == (-1, 1)
        assert plan.targets(3) == (1, 0, 4)

    def test_bad_arguments(self):
        """Test that m < 2 or a wrong residue count raises OutOfRange"""
        with pytest.raises(OutOfRange):
            plan_outer(2, 1, [0, 0])
        with pytest.raises(OutOfRange):
            plan_outer(2, 3, [0])


@pytest.mark.unit
class TestTower:
    """Tests for building the outer tower"""

    def test_curve_level(self):
        """Test that n=1 yields the genus-2 curve"""
        top = build_tower(plan_outer(1, 5, [2]))
        assert top.diamond.h == ((1, 2), (2, 1))
        assert top.chi_line(0, 1) == -9

    def test_surface_level(self):
        """Test the surface for n=2, m=3, outer residues (0, 1)"""
        plan = plan_outer(2, 3, [0, 1])
        top = build_tower(plan)
        curve = top.previous
        assert top.diamond.entry(1, 0) == curve.diamond.entry(1, 0) + 2
        assert top.diamond.entry(2, 0) == 322
        assert check_level(top, plan.targets(2), 3, plan.levels[0].e) == []

    def test_check_level_reports_mismatch(self):
        """Test that a wrong target is reported"""
        plan = plan_outer(2, 3, [0, 1])
        top = build_tower(plan)
        assert "h20" in check_level(top, (0, 2), 3)

    @pytest.mark.slow
    def test_random_outer_congruences(self):
        """Test the outer congruences for 200 random targets"""
        rng = random.Random(20240611)
        for _ in range(200):
            n, m = rng.randint(1, 5), rng.randint(2, 7)
            plan = plan_outer(n, m, _random_outer(rng, n, m))
            state = build_tower(plan)
            levels = [state]
            while levels[-1].previous is not None:
                levels.append(levels[-1].previous)
            for level in levels:
                e = None if level.dimension == 1 else plan.levels[level.dimension - 2].e
                assert check_level(level, plan.targets(level.dimension), m, e) == []


@pytest.mark.unit
class TestIncrements:
    """Tests for subvariety creation and the incr step"""

    @pytest.fixture
    def surface(self):
        """Abelian surface diamond"""
        return HodgeDiamond.from_rows([[1, 2, 1], [2, 4, 2], [1, 2, 1]])

    @pytest.fixture
    def fourfold(self):
        """Top of a four-level tower"""
        return build_tower(plan_outer(4, 3, [1, 2, 0, 1])).diamond

    def test_surface_incr(self, surface):
        """Test that incr(1,1) on a surface adds 2m+1 to l11"""
        for m in (2, 3, 5):
            result, steps = apply_incr(surface, 1, 1, m)
            assert _primitive_delta(surface, result)[(1, 1)] == 2 * m + 1
            assert len(steps) == 3 * m

    def test_threefold_incr(self):
        """Test incr(1,2) on a threefold with a plane-cubic center"""
        threefold = build_tower(plan_outer(3, 5, [1, 0, 4])).diamond
        result, _ = apply_incr(threefold, 1, 2, 5)
        delta = _primitive_delta(threefold, result)
        assert delta[(1, 2)] % 5 == 1
        assert delta[(1, 1)] % 5 == 0

    def test_fourfold_later_indices_fixed(self, fourfold):
        """Test that incr(1,2) leaves l22 and l13 fixed mod m"""
        result, _ = apply_incr(fourfold, 1, 2, 3)
        delta = _primitive_delta(fourfold, result)
        assert delta[(1, 2)] % 3 == 1
        assert delta[(2, 2)] % 3 == 0
        assert delta[(1, 3)] % 3 == 0

    def test_outer_entries_untouched(self, fourfold):
        """Test that blow-ups never change h^{p,0}"""
        result, _ = apply_incr(fourfold, 2, 2, 3)
        assert [result.entry(p, 0) for p in range(5)] == [fourfold.entry(p, 0) for p in range(5)]

    def test_not_inner(self, surface):
        """Test that an index outside I raises IndexOutOfI"""
        with pytest.raises(IndexOutOfI):
            apply_incr(surface, 1, 2, 3)

    def test_create_subvarieties_additive(self, fourfold):
        """Test that m rounds add m times the single-round delta"""
        once, _ = create_subvarieties(fourfold, 1, 2, 1)
        result, steps = create_subvarieties(fourfold, 1, 2, 5)
        assert (result - fourfold) == HodgeDiamond.from_rows(
            [[5 * v for v in row] for row in (once - fourfold).h]
        )
        assert (result - fourfold).reduce(5) == HodgeDiamond.zero(4)
        assert len(steps) == 10

    def test_create_subvarieties_out_of_range(self, surface):
        """Test that too large a bundle raises OutOfRange"""
        with pytest.raises(OutOfRange):
            create_subvarieties(surface, 1, 1, 2)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", range(2, 6))
    @pytest.mark.parametrize("m", [2, 3, 5])
    def test_incr_property_grid(self, n, m):
        """Test the incr delta and its agreement with the formal center"""
        rng = random.Random(n * 100 + m)
        top = build_tower(plan_outer(n, m, _random_outer(rng, n, m))).diamond
        for r, s in inner_order(n):
            result, _ = apply_incr(top, r, s, m)
            assert validate(result) == []
            delta = _primitive_delta(top, result)
            assert delta[(r, s)] % m == 1
            for pq in inner_order(n):
                if precedes((r, s), pq):
                    assert delta[pq] % m == 0

            formal = formal_center(r, s)
            formal_delta = blow_up(top, formal.diamond, n - s + 1) - top
            assert (result - top).reduce(m) == formal_delta.reduce(m)


@pytest.mark.unit
class TestSchedule:
    """Tests for the inner scheduler"""

    def test_processing_order(self):
        """Test that a threefold is processed (1,2) first"""
        diamond = build_tower(plan_outer(3, 2, [0, 0, 0])).diamond
        target = ResidueTarget(n=3, m=2, residues={(0, 0): 1})
        schedule = schedule_inner(diamond, target)
        assert [pq for pq, _ in schedule.entries] == [(1, 2), (1, 1)]

    def test_single_increment(self):
        """Test t11 = 1 when l11 = 0 mod 2 and the target is 1"""
        diamond = HodgeDiamond.from_rows([[1, 0, 0], [0, 3, 0], [0, 0, 1]])
        schedule = schedule_inner(diamond, ResidueTarget(n=2, m=2))
        assert schedule.entries == (((1, 1), 1),)
        assert schedule.total() == 1

    def test_target_already_met(self):
        """Test that a met target needs no increments"""
        diamond = HodgeDiamond.from_rows([[1, 0, 0], [0, 2, 0], [0, 0, 1]])
        target = ResidueTarget(n=2, m=3, residues={(1, 1): 2})
        assert schedule_inner(diamond, target).total() == 0

    def test_construct_inner_keeps_outer(self):
        """Test that inner adjustment of any diamond leaves the outer row alone"""
        start = HodgeDiamond.from_rows([[1, 2, 1], [2, 4, 2], [1, 2, 1]])
        target = ResidueTarget(n=2, m=5, residues={(0, 1): 2, (0, 2): 1, (1, 1): 3})
        result, steps = construct_inner(start, target)
        assert result.entry(1, 1) % 5 == 3
        assert [result.entry(0, q) for q in range(3)] == [1, 2, 1]
        assert steps


@pytest.mark.unit
class TestConstruct:
    """Tests for the full pipeline and recipe evaluation"""

    def test_curve_target(self):
        """Test n=1, m=5, h10=2 yields the genus-2 curve"""
        recipe, diamond = construct(ResidueTarget(n=1, m=5, residues={(0, 1): 2}))
        assert diamond == HodgeDiamond.from_rows([[1, 2], [2, 1]])
        assert recipe.steps == (CurveStep(genus=2, degree=8),)

    @pytest.mark.parametrize("target", list(enumerate_targets(2, 2)))
    def test_surfaces_mod_two(self, target):
        """Test every surface target mod 2"""
        recipe, diamond = construct(target)
        assert verify_congruence(diamond, target) == []
        assert validate(diamond) == []
        assert eval_recipe(recipe) == diamond

    def test_verify_congruence_reports(self):
        """Test that mismatching entries are named"""
        target = ResidueTarget(n=1, m=3, residues={(0, 1): 1})
        assert verify_congruence(HodgeDiamond.from_rows([[1, 2], [2, 1]]), target) == ["h(0,1)", "h(1,0)"]
        assert verify_congruence(HodgeDiamond.point(), target) == ["dimension"]

    def test_enumerate_targets(self):
        """Test the target count and lexicographic order"""
        targets = list(enumerate_targets(2, 3))
        assert len(targets) == 27
        assert targets[0].residues == {(0, 0): 1, (0, 1): 0, (0, 2): 0, (1, 1): 0}
        assert targets[1].residues[(1, 1)] == 1

    def test_check_target(self):
        """Test that a good target reports no failure"""
        assert check_target(ResidueTarget(n=2, m=3, residues={(0, 2): 1})) is None

    def test_construction_error_is_raised(self, monkeypatch):
        """Test that a broken verification surfaces as ConstructionError"""
        monkeypatch.setattr("src.construct.verify_congruence", lambda d, t: ["h(0,0)"])
        with pytest.raises(ConstructionError):
            construct(ResidueTarget(n=1, m=2))
        assert "h(0,0)" in check_target(ResidueTarget(n=1, m=2))

    def test_check_target_reports_any_engine_error(self, monkeypatch):
        """Test that an engine error in a worker becomes a failure reason"""
        def broken(target):
            raise InconsistentChi("middle row has a negative entry")
        monkeypatch.setattr("src.construct.construct", broken)
        assert check_target(ResidueTarget(n=1, m=2)) == "middle row has a negative entry"

    @pytest.mark.slow
    def test_recipe_round_trip(self):
        """Test that format, parse and eval reproduce the diamond byte for byte"""
        rng = random.Random(7)
        for _ in range(50):
            n, m = rng.randint(1, 3), rng.randint(2, 5)
            residues = {pq: rng.randrange(m) for pq in quarter_indices(n) if pq != (0, 0)}
            recipe, diamond = construct(ResidueTarget(n=n, m=m, residues=residues))
            evaluated = eval_recipe(parse_recipe(format_recipe(recipe)))
            assert format_diamond(evaluated) == format_diamond(diamond)


@pytest.mark.unit
class TestRecipeChecks:
    """Tests for recipe structure checks"""

    def test_curve_only(self):
        """Test a bare curve recipe"""
        recipe = Recipe(n=1, m=5, steps=(CurveStep(genus=2, degree=8),))
        assert eval_recipe(recipe) == HodgeDiamond.from_rows([[1, 2], [2, 1]])

    def test_divisor_blowup_on_curve(self):
        """Test that a point blow-up on a curve is a no-op"""
        recipe = Recipe(n=1, m=5, steps=(CurveStep(genus=2, degree=8), BlowupPointStep()))
        assert eval_recipe(recipe) == HodgeDiamond.from_rows([[1, 2], [2, 1]])

    def test_missing_curve(self):
        """Test that a recipe must start with a curve"""
        with pytest.raises(MalformedRecipe):
            check_recipe(Recipe(n=1, m=2, steps=(BlowupPointStep(),)))

    def test_tower_after_blowup(self):
        """Test that tower levels cannot follow blow-ups"""
        steps = (CurveStep(genus=0, degree=2), BlowupPointStep(), TowerLevelStep(elliptic_degree=3, e=1))
        with pytest.raises(MalformedRecipe):
            check_recipe(Recipe(n=2, m=2, steps=steps))

    def test_dimension_mismatch(self):
        """Test that the level count must match the header"""
        with pytest.raises(MalformedRecipe):
            check_recipe(Recipe(n=2, m=2, steps=(CurveStep(genus=0, degree=2),)))

