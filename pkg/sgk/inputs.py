#! /usr/bin/env python3

"""Loading of algebra, pair, subpair and section definition files"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence, Union

from sgk.exactnum import ZERO, Scalar
from sgk.exceptions import InputFileError, InvalidInputError, SgkError
from sgk.groupmodel import GroupModel, Pattern, SampleSet
from sgk.homogeneous import HCSubpair
from sgk.liesuper import LieSuperAlgebra, MatrixRealization, SuperBasis
from sgk.supergroup import HCPair, Section, TwistedConjugation

logger = logging.getLogger(__name__)

FIXTURES_DIR = Path(__file__).parent / "fixtures"

PathLike = Union[str, Path]

PARITIES = {"even": 0, "odd": 1, 0: 0, 1: 1}


def fixture_path(name: str) -> Path:
    """Path of a shipped fixture file"""
    return FIXTURES_DIR / name


@dataclass
class LoadedPair:
    path: Path
    pair: HCPair
    samples: SampleSet


@dataclass
class LoadedSubpair:
    path: Path
    model: LoadedPair
    subpair: HCSubpair

    @property
    def pair(self) -> HCPair:
        return self.model.pair

    @property
    def samples(self) -> SampleSet:
        return self.model.samples


def _read_json(path: Path) -> dict[str, Any]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputFileError(str(path), e.strerror or str(e)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputFileError(str(path), e.msg, e.lineno, e.colno) from None
    if not isinstance(data, dict):
        raise InputFileError(str(path), "top level must be a JSON object")
    return data


def _resolve(base: Path, ref: str) -> Path:
    """A file referenced from another one: relative to it, else a shipped fixture"""
    candidate = (base.parent / ref).resolve()
    if candidate.exists():
        return candidate
    shipped = fixture_path(ref)
    return shipped if shipped.exists() else candidate


def _field(path: Path, data: dict[str, Any], key: str) -> Any:
    try:
        return data[key]
    except KeyError:
        raise InputFileError(str(path), f"missing field {key!r}") from None


def load_algebra(path: PathLike, allow_invalid: bool = False) -> LieSuperAlgebra:
    path = Path(path)
    data = _read_json(path)
    try:
        basis_entries = _field(path, data, "basis")
        names = tuple(str(b["name"]) for b in basis_entries)
        parities = tuple(PARITIES[b["parity"]] for b in basis_entries)
        basis = SuperBasis(names, parities)
        brackets: dict[tuple[int, int], list[Scalar]] = {}
        for entry in data.get("brackets", []):
            key = (basis.index(entry["left"]), basis.index(entry["right"]))
            vector = [ZERO] * basis.dim
            for term in entry.get("result", []):
                k = basis.index(term["basis"])
                vector[k] = vector[k] + Scalar.coerce(term["coeff"])
            if key in brackets and brackets[key] != vector:
                raise InvalidInputError(f"bracket [{entry['left']}, {entry['right']}] given twice")
            brackets[key] = vector
        realization = None
        real = data.get("matrix_realization")
        if real is not None:
            matrices = real["matrices"]
            realization = MatrixRealization(
                int(real["m"]),
                int(real["n"]),
                tuple(
                    tuple(tuple(Scalar.coerce(v) for v in row) for row in matrices[name]) for name in names
                ),
            )
        algebra = LieSuperAlgebra(basis, brackets, realization)
    except (KeyError, TypeError) as e:
        raise InputFileError(str(path), f"malformed algebra definition: {e!r}") from None
    except InputFileError:
        raise
    except SgkError as e:
        raise InputFileError(str(path), str(e)) from None

    violations = algebra.jacobi_violations()
    if violations:
        (i, j, k), residual = violations[0]
        message = (
            f"super-Jacobi fails on ({algebra.name(i)},{algebra.name(j)},{algebra.name(k)}), "
            f"residual {algebra.format(residual)}"
        )
        if not allow_invalid:
            raise InputFileError(str(path), message)
        logger.warning("%s: accepted invalid algebra: %s", path, message)
    logger.debug("loaded algebra %s of dimension %d|%d", path.name, basis.n_even, basis.dim - basis.n_even)
    return algebra


def load_model(path: PathLike, allow_invalid: bool = False, closure_depth: Optional[int] = None) -> LoadedPair:
    path = Path(path)
    data = _read_json(path)
    algebra = load_algebra(_resolve(path, _field(path, data, "algebra")), allow_invalid)
    try:
        pattern = Pattern.parse(_field(path, data, "pattern"))
        if "n" in data and int(data["n"]) != pattern.n:
            raise InvalidInputError(f"n = {data['n']} but the pattern is {pattern.n}x{pattern.n}")
        group = GroupModel(algebra, pattern, str(data.get("name", "G")))
        depth = closure_depth if closure_depth is not None else int(data.get("closure_depth", 2))
        samples = SampleSet(group, [group.point(rows) for rows in data.get("samples", [])], depth)
        alpha = None
        alpha_entry = data.get("alpha")
        if alpha_entry is not None and alpha_entry.get("kind", "conjugation") != "conjugation":
            if alpha_entry["kind"] != "twisted":
                raise InvalidInputError(f"unknown alpha kind {alpha_entry['kind']!r}")
            alpha = TwistedConjugation(algebra, group.parse_expr(str(alpha_entry["factor"])))
    except (KeyError, TypeError) as e:
        raise InputFileError(str(path), f"malformed model definition: {e!r}") from None
    except InputFileError:
        raise
    except SgkError as e:
        raise InputFileError(str(path), str(e)) from None

    try:
        pair = HCPair(group, alpha, samples, name=group.name)
    except InvalidInputError as e:
        if not allow_invalid:
            raise InputFileError(str(path), str(e)) from None
        logger.warning("%s: accepted invalid pair: %s", path, e)
        pair = HCPair(group, alpha, samples, validate=False, name=group.name)
    return LoadedPair(path, pair, samples)


def _span_vector(algebra: LieSuperAlgebra, entry: Any) -> Any:
    if isinstance(entry, str):
        return algebra.basis_vector(algebra.basis.index(entry))
    return algebra.vector(entry)


def load_subpair(path: PathLike, allow_invalid: bool = False, closure_depth: Optional[int] = None) -> LoadedSubpair:
    """A subpair file names its parent model; bracket closure is not checked on load"""
    path = Path(path)
    data = _read_json(path)
    model = load_model(_resolve(path, _field(path, data, "model")), allow_invalid, closure_depth)
    pair = model.pair
    try:
        pattern = Pattern.parse(_field(path, data, "subgroup_pattern"))
        span = [_span_vector(pair.algebra, entry) for entry in _field(path, data, "subalgebra_span")]
        points = [pair.group.point(rows) for rows in data.get("samples", [])]
        sub = HCSubpair(pair, pattern, span, points, model.samples.closure_depth, str(data.get("name", "H")))
    except (KeyError, TypeError) as e:
        raise InputFileError(str(path), f"malformed subpair definition: {e!r}") from None
    except InputFileError:
        raise
    except SgkError as e:
        raise InputFileError(str(path), str(e)) from None
    return LoadedSubpair(path, model, sub)


def load_section(path: PathLike, pair: Optional[HCPair] = None, allow_invalid: bool = False) -> Section:
    """A section table; without pair the model named in the file is loaded"""
    path = Path(path)
    data = _read_json(path)
    if pair is None:
        ref = _resolve(path, _field(path, data, "pair"))
        pair = load_any(ref, allow_invalid).pair  # type: ignore[union-attr]
    try:
        table = {}
        odd = set(pair.algebra.basis.odd_indices)
        for entry in _field(path, data, "table"):
            word = tuple(pair.algebra.basis.index(name) for name in entry["word"])
            if any(k not in odd for k in word) or list(word) != sorted(set(word)):
                raise InvalidInputError(f"word {entry['word']} is not an increasing word of odd generators")
            table[word] = pair.group.parse_expr(str(entry["expr"]))
        return Section(pair, table)
    except (KeyError, TypeError) as e:
        raise InputFileError(str(path), f"malformed section definition: {e!r}") from None
    except InputFileError:
        raise
    except SgkError as e:
        raise InputFileError(str(path), str(e)) from None


def load_any(
    path: PathLike, allow_invalid: bool = False, closure_depth: Optional[int] = None
) -> Union[LieSuperAlgebra, LoadedPair, LoadedSubpair, Section]:
    """Dispatch on the top-level fields of a definition file"""
    path = Path(path)
    data = _read_json(path)
    if "basis" in data:
        return load_algebra(path, allow_invalid)
    if "subgroup_pattern" in data:
        return load_subpair(path, allow_invalid, closure_depth)
    if "pattern" in data:
        return load_model(path, allow_invalid, closure_depth)
    if "table" in data:
        return load_section(path, allow_invalid=allow_invalid)
    raise InputFileError(str(path), "not an algebra, model, subpair or section definition")


def parse_inputs(
    paths: Sequence[PathLike], allow_invalid: bool = False, closure_depth: Optional[int] = None
) -> list[Union[LieSuperAlgebra, LoadedPair, LoadedSubpair, Section]]:
    """Load and validate every input file"""
    if not paths:
        raise InvalidInputError("no input files given")
    return [load_any(p, allow_invalid, closure_depth) for p in paths]
