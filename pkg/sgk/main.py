#! /usr/bin/env python3

import argparse
import logging
import os
import random
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import psutil

from sgk._version import VERSION
from sgk.envelope import gamma_morphism_check, hopf_axiom_check
from sgk.exactnum import ONE, ZERO, unit_vector
from sgk.exceptions import InputFileError, InvalidInputError, SgkError
from sgk.homogeneous import (
    coset_membership,
    cp12_demo,
    split_homogeneous_check,
    subpair_check,
)
from sgk.inputs import LoadedPair, LoadedSubpair, load_section, parse_inputs
from sgk.liesuper import LieSuperAlgebra
from sgk.report import Report
from sgk.supergroup import (
    GroupHom,
    HCMorphism,
    group_axiom_check,
    morphism_uniqueness_check,
    pullback_witness,
    split_check,
)

# GET ENVIRONMENT VARIABLES
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
SENTRY_DSN = os.getenv("SENTRY_DSN", False)
DEFAULT_DEGREE = int(os.getenv("SGK_DEGREE", "2"))
DEFAULT_CLOSURE_DEPTH = int(os.getenv("SGK_CLOSURE_DEPTH", "2"))
DEFAULT_SEED = int(os.getenv("SGK_SEED", "0"))

# Configure logging level
logging.basicConfig(level=LOG_LEVEL)

if SENTRY_DSN:
    import sentry_sdk

    # Initialize Sentry for error tracking
    sentry_sdk.init(SENTRY_DSN)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ()
    degree: int = DEFAULT_DEGREE
    closure_depth: int = DEFAULT_CLOSURE_DEPTH
    seed: int = DEFAULT_SEED
    allow_invalid: bool = False
    out: Optional[str] = None
    timing: bool = False

    def __post_init__(self) -> None:
        if self.degree < 1 or self.closure_depth < 1:
            raise InvalidInputError("degree and closure depth must be at least 1")

    @property
    def rng(self) -> random.Random:
        return random.Random(self.seed)


def _loaded(config: RunConfig, kind: type) -> list[Any]:
    found = parse_inputs(config.inputs, config.allow_invalid, config.closure_depth)
    wrong = [p for p, item in zip(config.inputs, found) if not isinstance(item, kind)]
    if wrong:
        raise InputFileError(wrong[0], f"{config.command} expects a {kind.__name__} definition")
    return found


def _algebras(config: RunConfig) -> list[LieSuperAlgebra]:
    """Algebras given directly or through a model or subpair file"""
    algebras = []
    for item in parse_inputs(config.inputs, config.allow_invalid, config.closure_depth):
        if isinstance(item, LieSuperAlgebra):
            algebras.append(item)
        elif isinstance(item, (LoadedPair, LoadedSubpair)):
            algebras.append(item.pair.algebra)
        else:
            raise InvalidInputError(f"{config.command} expects algebra or model definitions")
    return algebras


def check_jacobi(config: RunConfig) -> Report:
    report = Report()
    for algebra in _algebras(config):
        report.extend(algebra.check_jacobi())
    return report


def check_hopf(config: RunConfig) -> Report:
    report = Report()
    for algebra in _algebras(config):
        report.extend(hopf_axiom_check(algebra, config.degree))
        report.extend(gamma_morphism_check(algebra))
    return report


def check_group_axioms(config: RunConfig) -> Report:
    report = Report()
    for loaded in _loaded(config, LoadedPair):
        report.extend(loaded.pair.check(loaded.samples))
        report.extend(group_axiom_check(loaded.pair, loaded.samples, config.degree, config.rng))
    return report


def run_split_check(config: RunConfig) -> Report:
    report = Report()
    for item in parse_inputs(config.inputs, config.allow_invalid, config.closure_depth):
        if isinstance(item, LieSuperAlgebra):
            witness = item.odd_bracket_witness()
            if witness is None:
                report.add("supergroup", "split", True, f"[g1, g1] = 0 on {len(item.basis.odd_indices)} odd generators")
            else:
                i, j = witness
                report.add(
                    "supergroup",
                    "split",
                    False,
                    f"[{item.name(i)}, {item.name(j)}] = {item.format(item.structure(i, j))}",
                )
        elif isinstance(item, LoadedSubpair):
            report.extend(split_homogeneous_check(item.pair, item.subpair).report)
        elif isinstance(item, LoadedPair):
            report.extend(split_check(item.pair, item.samples, config.rng).report)
        else:
            raise InvalidInputError("split-check expects algebra, model or subpair definitions")
    return report


def coset_check(config: RunConfig) -> Report:
    """coset-check SUBPAIR [SECTION...]; without sections the unit section is checked"""
    if not config.inputs:
        raise InvalidInputError("coset-check needs a subpair file")
    loaded = _loaded(replace(config, inputs=config.inputs[:1]), LoadedSubpair)[0]
    report = subpair_check(loaded.pair, loaded.subpair)
    if not report.passed:
        return report
    sections = [(Path(p).stem, load_section(p, loaded.pair)) for p in config.inputs[1:]]
    if not sections:
        sections = [("one", loaded.pair.one())]
    for name, section in sections:
        membership = coset_membership(loaded.subpair, section, loaded.samples, config.degree)
        detail = f"{membership.checked} evaluations"
        if membership.witness:
            detail += f", {membership.witness}"
        report.add("homogeneous", f"coset.{name}", membership.member, detail)
    return report


def run_isotropy_rep(config: RunConfig) -> Report:
    report = Report()
    for loaded in _loaded(config, LoadedSubpair):
        closure = subpair_check(loaded.pair, loaded.subpair)
        report.extend(closure)
        if closure.passed:
            report.extend(split_homogeneous_check(loaded.pair, loaded.subpair).report)
    return report


def _perturbation(m: HCMorphism) -> tuple[int, Any]:
    """A shift of φ on the first source generator by a target generator of the same parity"""
    source, target = m.source.algebra, m.target.algebra
    column = m.column(0)
    parity = source.parity(0)
    for k in range(target.dim):
        if target.parity(k) == parity and column[k] == ZERO:
            return 0, unit_vector(target.dim, k)
    return 0, tuple(c * ONE for c in column)


def morphism_check(config: RunConfig) -> Report:
    report = Report()
    for loaded in _loaded(config, LoadedSubpair):
        sub = loaded.subpair
        closure = subpair_check(loaded.pair, sub)
        report.extend(closure)
        if not closure.passed:
            continue
        inclusion = HCMorphism(
            sub.pair,
            loaded.pair,
            GroupHom.inclusion(sub.model, loaded.pair.group),
            sub.inclusion,
            validate=False,
            name="inclusion",
        )
        report.extend(inclusion.check(sub.samples))
        identity = HCMorphism.identity(loaded.pair)
        report.extend(identity.check(loaded.samples))
        report.extend(morphism_uniqueness_check(inclusion, identity.compose(inclusion), sub.samples, config.degree))
        report.extend(inclusion.mu_compatibility_check(sub.samples, config.degree, config.rng))
        if sub.algebra.dim:
            shifted = inclusion.perturbed(*_perturbation(inclusion))
            witness = pullback_witness(inclusion, shifted, sub.samples, config.degree)
            report.add(
                "supergroup",
                "morphism.perturbation",
                witness is not None,
                f"perturbation detected at degree {witness.degree}" if witness else "perturbation not detected",
            )
    return report


def demo_cp12(config: RunConfig) -> Report:
    if config.inputs:
        raise InvalidInputError("demo-cp12 takes no input files")
    return cp12_demo(config.seed, config.degree)


COMMANDS: dict[str, Callable[[RunConfig], Report]] = {
    "check-jacobi": check_jacobi,
    "check-hopf": check_hopf,
    "check-group-axioms": check_group_axioms,
    "split-check": run_split_check,
    "coset-check": coset_check,
    "isotropy-rep": run_isotropy_rep,
    "morphism-check": morphism_check,
    "demo-cp12": demo_cp12,
}


def run_suite(config: RunConfig) -> tuple[int, Report]:
    """Exit status 0 when every check passes, 1 otherwise"""
    try:
        command = COMMANDS[config.command]
    except KeyError:
        raise InvalidInputError(f"unknown command {config.command!r}") from None
    logger.info("Running %s on %d input(s)", config.command, len(config.inputs))
    report = command(config)
    logger.info("%s finished: %d passed, %d failed", config.command, report.count(True), report.count(False))
    return (0 if report.passed else 1), report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sgk", description="Exact checks for Harish-Chandra pairs and supergroups")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("inputs", nargs="*")
    parser.add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    parser.add_argument("--closure-depth", type=int, default=DEFAULT_CLOSURE_DEPTH)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--allow-invalid", action="store_true", help="accept mutation fixtures")
    parser.add_argument("--out", help="write the report to this file")
    parser.add_argument("--timing", action="store_true", help="add elapsed time and memory to the summary")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main function to run the program."""
    args = build_parser().parse_intermixed_args(argv)
    started = time.perf_counter()
    try:
        config = RunConfig(
            command=args.command,
            inputs=tuple(args.inputs),
            degree=args.degree,
            closure_depth=args.closure_depth,
            seed=args.seed,
            allow_invalid=args.allow_invalid,
            out=args.out,
            timing=args.timing,
        )
        status, report = run_suite(config)
    except SgkError as e:
        logger.debug("run failed", exc_info=True)
        sys.stderr.write(f"sgk: {e}\n")
        return 2

    extra = {}
    elapsed = None
    if config.timing:
        elapsed = round(time.perf_counter() - started, 3)
        extra["rss_mb"] = round(psutil.Process().memory_info().rss / 1024**2, 1)
    text = report.render(elapsed, **extra)
    if config.out:
        Path(config.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
