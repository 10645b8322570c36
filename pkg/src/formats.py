"""
Line-oriented text formats: targets, diamonds, recipes, polynomials, certificates
"""
from fractions import Fraction
from typing import Iterator

from pydantic import ValidationError

from src.diamond import HodgeDiamond, quarter_indices, quarter_representative
from src.errors import OutOfRange, ParseError
from src.models import (
    BlowupBundleStep,
    BlowupPointStep,
    BlowupProjStep,
    CurveStep,
    Recipe,
    RecipeStep,
    ResidueTarget,
    TowerLevelStep,
)
from src.relations import PolynomialRelation, RefutationCertificate, make_relation, normalise_variable


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    """Non-empty lines as tokens, with 1-based numbers; '#' starts a comment"""
    for number, line in enumerate(text.splitlines(), start=1):
        tokens = line.split("#", 1)[0].split()
        if tokens:
            yield number, tokens


def _ints(tokens: list[str], count: int, line: int) -> list[int]:
    if len(tokens) != count:
        raise ParseError(line, f"'{tokens[0]}' expects {count - 1} integer(s), got {len(tokens) - 1}")
    try:
        return [int(t) for t in tokens[1:]]
    except ValueError:
        raise ParseError(line, f"non-integer token in '{' '.join(tokens)}'")


def _header(tokens: list[str], line: int, seen: dict[str, int]) -> None:
    key = tokens[0]
    if key in seen:
        raise ParseError(line, f"duplicate '{key}' header")
    (seen[key],) = _ints(tokens, 2, line)


def _require(seen: dict[str, int], keys: tuple[str, ...], line: int) -> None:
    for key in keys:
        if key not in seen:
            raise ParseError(line, f"missing '{key}' header")


def _validation_message(error: ValidationError) -> str:
    return "; ".join(e["msg"] for e in error.errors())


def parse_target(text: str) -> ResidueTarget:
    seen: dict[str, int] = {}
    residues: dict[tuple[int, int], int] = {}
    last = 0
    for line, tokens in _lines(text):
        last = line
        if tokens[0] in ("dim", "mod"):
            _header(tokens, line, seen)
        elif tokens[0] == "h":
            _require(seen, ("dim", "mod"), line)
            p, q, r = _ints(tokens, 4, line)
            n, m = seen["dim"], seen["mod"]
            try:
                p, q = quarter_representative(n, p, q)
            except OutOfRange as err:
                raise ParseError(line, str(err))
            if not 0 <= r < m:
                raise ParseError(line, f"residue {r} outside 0..{m - 1}")
            if (p, q) in residues:
                raise ParseError(line, f"duplicate entry ({p},{q})")
            if (p, q) == (0, 0) and r != 1:
                raise ParseError(line, "h 0 0 must be 1")
            residues[(p, q)] = r
        else:
            raise ParseError(line, f"unknown keyword '{tokens[0]}'")
    _require(seen, ("dim", "mod"), last + 1)
    try:
        return ResidueTarget(n=seen["dim"], m=seen["mod"], residues=residues)
    except ValidationError as e:
        raise ParseError(last, _validation_message(e))


def format_target(target: ResidueTarget) -> str:
    lines = [f"dim {target.n}", f"mod {target.m}"]
    lines.extend(f"h {p} {q} {target.residues[(p, q)]}" for p, q in quarter_indices(target.n))
    return "\n".join(lines) + "\n"


def format_diamond(diamond: HodgeDiamond, pretty: bool = False) -> str:
    if pretty:
        return pretty_diamond(diamond)
    return "".join(f"h {p} {q} {v}\n" for p, q, v in diamond.items())


def pretty_diamond(diamond: HodgeDiamond) -> str:
    """Centered diamond, h^{n,n} on top and h^{0,0} at the bottom"""
    n = diamond.n
    width = max(len(str(v)) for _, _, v in diamond.items())
    lines = []
    for k in range(2 * n, -1, -1):
        row = [diamond.entry(p, k - p) for p in range(min(n, k), max(0, k - n) - 1, -1)]
        cells = (" " * width).join(str(v).center(width) for v in row)
        lines.append((" " * (width * (n + 1 - len(row))) + cells).rstrip())
    return "\n".join(lines) + "\n"


def parse_diamond(text: str) -> HodgeDiamond:
    entries: dict[tuple[int, int], int] = {}
    for line, tokens in _lines(text):
        if tokens[0] != "h":
            raise ParseError(line, f"unknown keyword '{tokens[0]}'")
        p, q, v = _ints(tokens, 4, line)
        if (p, q) in entries:
            raise ParseError(line, f"duplicate entry ({p},{q})")
        entries[(p, q)] = v
    size = round(len(entries) ** 0.5)
    if size == 0 or size * size != len(entries):
        raise ParseError(0, f"{len(entries)} entries do not form a square grid")
    try:
        return HodgeDiamond.from_rows([[entries[(p, q)] for q in range(size)] for p in range(size)])
    except KeyError as e:
        raise ParseError(0, f"missing entry {e.args[0]}")


STEP_KEYWORDS = {
    "curve": (CurveStep, ("genus", "degree")),
    "tower": (TowerLevelStep, ("elliptic_degree", "e")),
    "blowup-point": (BlowupPointStep, ()),
    "blowup-proj": (BlowupProjStep, ("s",)),
    "blowup-bundle": (BlowupBundleStep, ("r", "s", "d")),
}


def parse_recipe(text: str) -> Recipe:
    seen: dict[str, int] = {}
    steps: list[RecipeStep] = []
    last = 0
    for line, tokens in _lines(text):
        last = line
        if tokens[0] in ("dim", "mod"):
            _header(tokens, line, seen)
            continue
        if tokens[0] not in STEP_KEYWORDS:
            raise ParseError(line, f"unknown step '{tokens[0]}'")
        model, fields = STEP_KEYWORDS[tokens[0]]
        values = _ints(tokens, len(fields) + 1, line)
        try:
            steps.append(model(**dict(zip(fields, values))))
        except ValidationError as e:
            raise ParseError(line, _validation_message(e))
    _require(seen, ("dim", "mod"), last + 1)
    try:
        return Recipe(n=seen["dim"], m=seen["mod"], steps=tuple(steps))
    except ValidationError as e:
        raise ParseError(last, _validation_message(e))


def _step_line(step: RecipeStep) -> str:
    _, fields = STEP_KEYWORDS[step.kind]
    return " ".join([step.kind] + [str(getattr(step, name)) for name in fields])


def format_recipe(recipe: Recipe) -> str:
    lines = [f"dim {recipe.n}", f"mod {recipe.m}"]
    lines.extend(_step_line(step) for step in recipe.steps)
    return "\n".join(lines) + "\n"


def parse_polynomial(text: str) -> PolynomialRelation:
    """`dim n`, optional `inner`, then `term <coef> [<p> <q> <exp>]...` lines"""
    seen: dict[str, int] = {}
    inner = False
    raw_terms: list[tuple[int, list[str]]] = []
    last = 0
    for line, tokens in _lines(text):
        last = line
        if tokens[0] == "dim":
            _header(tokens, line, seen)
        elif tokens[0] == "inner" and len(tokens) == 1:
            inner = True
        elif tokens[0] == "term":
            raw_terms.append((line, tokens))
        else:
            raise ParseError(line, f"unknown keyword '{tokens[0]}'")
    _require(seen, ("dim",), last + 1)
    n = seen["dim"]
    if n < 1:
        raise ParseError(last, f"dimension must be positive, got {n}")

    terms = []
    for line, tokens in raw_terms:
        if len(tokens) < 2 or (len(tokens) - 2) % 3:
            raise ParseError(line, "term expects a coefficient followed by <p> <q> <exp> triples")
        try:
            coefficient = Fraction(tokens[1])
            numbers = [int(t) for t in tokens[2:]]
        except (ValueError, ZeroDivisionError):
            raise ParseError(line, f"bad number in '{' '.join(tokens)}'")
        powers: dict[tuple[int, int], int] = {}
        for i in range(0, len(numbers), 3):
            p, q, e = numbers[i:i + 3]
            if e < 0:
                raise ParseError(line, f"negative exponent {e}")
            try:
                index = normalise_variable(n, p, q, inner)
            except OutOfRange as err:
                raise ParseError(line, str(err))
            powers[index] = powers.get(index, 0) + e
        terms.append((coefficient, powers))
    try:
        return make_relation(n, terms, inner)
    except OutOfRange as err:
        raise ParseError(last, str(err))


def format_polynomial(f: PolynomialRelation) -> str:
    lines = [f"dim {f.n}"] + (["inner"] if f.inner else [])
    for coefficient, powers in f.monomials():
        triples = " ".join(f"{p} {q} {e}" for (p, q), e in sorted(powers.items()))
        lines.append(f"term {coefficient} {triples}".rstrip())
    return "\n".join(lines) + "\n"


def format_certificate(certificate: RefutationCertificate) -> str:
    lines = [f"modulus {certificate.modulus}"]
    lines.extend(f"witness {p} {q} {v}" for (p, q), v in sorted(certificate.witness.items()))
    lines.append(f"witness-value {certificate.witness_value}")
    lines.append(f"diamond-value {certificate.diamond_value}")
    return "\n".join(lines) + "\n"
