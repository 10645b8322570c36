"""
Command-line entry point: construct, verify, eval, hypersurface, enumerate, refute
"""
import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from src.blocks import HypersurfaceSpec, hypersurface_diamond
from src.config import default_jobs, setup_logging
from src.construct import check_target, construct, enumerate_targets, eval_recipe, verify_congruence
from src.diamond import quarter_indices, validate
from src.errors import ConstructionError, HodgeError, MalformedRecipe, OutOfRange, ParseError, ZeroPolynomial
from src.formats import (
    format_certificate,
    format_diamond,
    format_recipe,
    parse_polynomial,
    parse_recipe,
    parse_target,
)
from src.relations import refute, verify_certificate

logger = logging.getLogger("hodge_mod.cli")

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2
INPUT_ERRORS = (ParseError, MalformedRecipe, OutOfRange, ZeroPolynomial)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(0, f"cannot read {path}: {e.strerror}")


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def cmd_construct(args: argparse.Namespace) -> int:
    target = parse_target(_read(args.target))
    recipe, diamond = construct(target)
    _write(args.recipe_out, format_recipe(recipe))
    sys.stdout.write(format_diamond(diamond, args.pretty))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    recipe = parse_recipe(_read(args.recipe))
    target = parse_target(_read(args.target))
    diamond = eval_recipe(recipe)
    problems = verify_congruence(diamond, target) + validate(diamond)
    if recipe.m != target.m:
        problems.insert(0, "modulus")
    if problems:
        print(f"fail {' '.join(problems)}")
        return EXIT_FAILED
    print("ok")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    diamond = eval_recipe(parse_recipe(_read(args.recipe)))
    sys.stdout.write(format_diamond(diamond, args.pretty))
    return EXIT_OK


def cmd_hypersurface(args: argparse.Namespace) -> int:
    diamond = hypersurface_diamond(HypersurfaceSpec(args.dim, args.degree))
    sys.stdout.write(format_diamond(diamond, args.pretty))
    return EXIT_OK


def _describe(target) -> str:
    return " ".join(f"h{p}{q}={target.residues[(p, q)]}" for p, q in quarter_indices(target.n))


def cmd_enumerate(args: argparse.Namespace) -> int:
    jobs = args.jobs or default_jobs()
    n, m = args.dim, args.mod
    if n < 1 or m < 2:
        raise OutOfRange(f"need --dim >= 1 and --mod >= 2, got {n} and {m}")
    targets = list(enumerate_targets(n, m))
    logger.info(f"Enumerating {len(targets)} targets for n={n} m={m} with {jobs} job(s)")

    if jobs == 1:
        results = list(map(check_target, targets))
    else:
        # map keeps target order, so output does not depend on the job count
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            chunk = max(1, len(targets) // (4 * jobs))
            results = list(executor.map(check_target, targets, chunksize=chunk))
    failure = next(((t, r) for t, r in zip(targets, results) if r is not None), None)

    if failure:
        target, reason = failure
        print(f"fail {_describe(target)}: {reason}")
        return EXIT_FAILED
    print(f"ok {len(targets)}")
    return EXIT_OK


def cmd_refute(args: argparse.Namespace) -> int:
    f = parse_polynomial(_read(args.poly))
    certificate = refute(f)
    recipe_text = format_recipe(certificate.recipe)
    _write(args.recipe_out, recipe_text)
    sys.stdout.write(format_certificate(certificate))
    sys.stdout.write(recipe_text)
    if not verify_certificate(f, certificate):
        print("certificate failed re-verification", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hodge-mod",
        description="Construct varieties with prescribed Hodge numbers modulo m",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("construct", help="build and verify a recipe for a target")
    p.add_argument("--target", required=True)
    p.add_argument("--recipe-out")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(handler=cmd_construct)

    p = commands.add_parser("verify", help="re-evaluate a recipe against a target")
    p.add_argument("--recipe", required=True)
    p.add_argument("--target", required=True)
    p.set_defaults(handler=cmd_verify)

    p = commands.add_parser("eval", help="evaluate a recipe to its diamond")
    p.add_argument("--recipe", required=True)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(handler=cmd_eval)

    p = commands.add_parser("hypersurface", help="diamond of a smooth hypersurface")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(handler=cmd_hypersurface)

    p = commands.add_parser("enumerate", help="construct every target for (n, m)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--jobs", type=int)
    p.set_defaults(handler=cmd_enumerate)

    p = commands.add_parser("refute", help="certify that a polynomial relation fails")
    p.add_argument("--poly", required=True)
    p.add_argument("--recipe-out")
    p.set_defaults(handler=cmd_refute)
    return parser


def main(argv: list[str] | None = None) -> int:
    setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK

    if getattr(args, "jobs", None) is not None and args.jobs < 1:
        print(f"error: --jobs must be positive, got {args.jobs}", file=sys.stderr)
        return EXIT_INPUT

    logger.info(f"Command {args.command} started")
    try:
        code = args.handler(args)
    except INPUT_ERRORS as e:
        logger.warning(f"Command {args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ConstructionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except HodgeError as e:
        logger.error(f"Command {args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    logger.info(f"Command {args.command} finished with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
