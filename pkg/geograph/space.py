#!/usr/bin/env python3

"""
Space files.

One JSON document per space, schema_version 1. Rationals are strings ("3/2") so exactness survives the round trip.
Metric coefficients, one-form entries, the q-power exponent and the weights may name a parameter instead,
the parameter section holds the default value and --param overrides it.

Errors cite the line for malformed JSON and the field path for everything else.
"""

import json
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from os import environ
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from jsonschema import Draft7Validator
from jsonschema.exceptions import best_match

from geograph.algebra import HomogeneousSpace, LieAlgebraSpec, ModuleSplit, ReductiveSplit
from geograph.enums import NormFamily, ViolationKind
from geograph.errors import ArgumentError, GeographError, SpaceSpecError, SpaceSpecSemanticError, \
    SpaceSpecSyntaxError, UnknownSpaceError
from geograph.exactnum import format_rational, parse_rational
from geograph.globals import CATALOG_DIR, CATALOG_DIR_ENV_VAR, SCHEMA_VERSION
from geograph.logging import get_logger
from geograph.metrics import BlockForm, MetricFamily, MetricParams, NormSpec, OneFormSpec, QPowerNorm, \
    RandersNorm, WeightedSquaresNorm, form_invariance_violations

logger = get_logger()

_ENTRY = {"type": "string", "minLength": 1}
_RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"}
_INDEX = {"type": "integer", "minimum": 0}

SPACE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["schema_version", "name", "basis", "structure", "h", "m", "blocks", "family", "metrics", "norm"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
        "basis": {"type": "array", "items": _ENTRY, "minItems": 1},
        "structure": {
            "type": "array",
            "items": {
                "type": "array",
                "items": [_INDEX, _INDEX, {"type": "array",
                                           "items": {"type": "array", "items": [_INDEX, _RATIONAL],
                                                     "additionalItems": False, "minItems": 2}}],
                "additionalItems": False,
                "minItems": 3,
            },
        },
        "h": {"type": "array", "items": _INDEX},
        "m": {"type": "array", "items": _INDEX, "minItems": 1},
        "basis_change": {"type": "array", "items": {"type": "array", "items": _RATIONAL}},
        "blocks": {"type": "array", "items": {"type": "array", "items": _INDEX, "minItems": 1}, "minItems": 1},
        "block_forms": {"type": "array", "items": {"type": "array", "items": {"type": "array", "items": _RATIONAL}}},
        "family": {"type": "array", "items": _ENTRY, "minItems": 1},
        "parameters": {"type": "object", "additionalProperties": _RATIONAL},
        "metrics": {"type": "array", "items": {"type": "array", "items": _ENTRY}, "minItems": 1},
        "one_forms": {"type": "array", "items": {"type": "array", "items": _ENTRY}},
        "norm": {
            "type": "object",
            "required": ["family"],
            "properties": {
                "family": {"enum": [family.value for family in NormFamily]},
                "exponent": _ENTRY,
                "weights": {"type": "array", "items": _ENTRY},
                "form_weights": {"type": "array", "items": _ENTRY},
            },
            "additionalProperties": False,
        },
        "flags": {
            "type": "object",
            "properties": {"maximal_isometry_group": {"type": "boolean"}},
            "additionalProperties": False,
        },
    },
}

# Field a structural violation is reported against
VIOLATION_FIELDS = {
    ViolationKind.STORAGE: "structure",
    ViolationKind.ANTISYMMETRY: "structure",
    ViolationKind.JACOBI: "structure",
    ViolationKind.PARTITION: "h/m",
    ViolationKind.BASIS_CHANGE: "basis_change",
    ViolationKind.REDUCTIVITY: "h/m",
    ViolationKind.MODULE_INVARIANCE: "blocks",
}


def _field_path(parts: Sequence) -> str:
    path = ""
    for part in parts:
        path += f"[{part}]" if isinstance(part, int) else (f".{part}" if path else str(part))
    return path or "<document>"


@contextmanager
def _semantic_field(source: str, field_name: str):
    """
    Re-raise construction errors of one field as a semantic error naming that field
    """
    try:
        yield
    except SpaceSpecError:
        raise
    except GeographError as error:
        logger.error(f"{source}: field '{field_name}': {error}")
        raise SpaceSpecSemanticError(f"{source}: field '{field_name}': {error}") from error


def _rational(entry: str, source: str, field_name: str, parameters: Mapping[str, Fraction] = None) -> Fraction:
    """
    Parameter reference or rational literal
    """
    if parameters is not None and entry in parameters:
        return parameters[entry]
    try:
        return parse_rational(entry)
    except (ValueError, GeographError) as error:
        logger.error(f"{source}: field '{field_name}': cannot read '{entry}' as a rational: {error}")
        raise SpaceSpecSyntaxError(f"{source}: field '{field_name}': cannot read '{entry}' as a rational") \
            from error


def _rationals(entries: Sequence[str], source: str, field_name: str,
               parameters: Mapping[str, Fraction] = None) -> Tuple[Fraction, ...]:
    return tuple(_rational(entry, source, f"{field_name}[{index}]", parameters)
                 for index, entry in enumerate(entries))


def _parameters(document: Dict, overrides: Optional[Mapping[str, str]], source: str) -> Dict[str, Fraction]:
    parameters = {key: _rational(value, source, f"parameters.{key}")
                  for key, value in document.get("parameters", {}).items()}
    for key, value in (overrides or {}).items():
        if key not in parameters:
            logger.error(f"Space {document.get('name')} has no parameter '{key}', "
                         f"known parameters are {sorted(parameters)}")
            raise ArgumentError(f"Space {document.get('name')} has no parameter '{key}'")
        try:
            parameters[key] = parse_rational(value)
        except (ValueError, GeographError) as error:
            logger.error(f"--param {key}={value} is not a rational")
            raise ArgumentError(f"--param {key}={value} is not a rational") from error
    return parameters


def _build_norm(document: Dict, family: MetricFamily, metrics: Sequence[MetricParams],
                forms: Sequence[OneFormSpec], parameters: Mapping[str, Fraction], source: str) -> NormSpec:
    options = document["norm"]
    tag = NormFamily(options["family"])

    with _semantic_field(source, "norm"):
        if tag is NormFamily.QPOWER:
            if "exponent" not in options:
                logger.error(f"{source}: field 'norm.exponent' is required for q-power norms")
                raise SpaceSpecSemanticError(f"{source}: field 'norm.exponent' is required for q-power norms")
            exponent = _rational(options["exponent"], source, "norm.exponent", parameters)
            return QPowerNorm(exponent, family, metrics, forms)

        if tag is NormFamily.WEIGHTED_SQUARES:
            weights = _rationals(options.get("weights", ["1"] * len(metrics)), source, "norm.weights", parameters)
            form_weights = _rationals(options.get("form_weights", ["0"] * len(forms)), source,
                                      "norm.form_weights", parameters)
            return WeightedSquaresNorm(weights, family, metrics, forms, form_weights)

        if len(metrics) != 1 or len(forms) > 1:
            logger.error(f"{source}: field 'norm': Randers norms take one metric and at most one one-form, "
                         f"got {len(metrics)} and {len(forms)}")
            raise SpaceSpecSemanticError(f"{source}: field 'norm': Randers norms take one metric and "
                                         f"at most one one-form")
        return RandersNorm(family, metrics[0], forms[0] if forms else None)


@dataclass(frozen=True)
class SpaceSpecFile:
    """
    Validated content of a space file: the space, its metric family, the resolved component metrics and
    one-forms and the norm built from them
    """
    name: str
    description: str
    space: HomogeneousSpace
    family: MetricFamily
    parameters: Mapping[str, Fraction]
    metrics: Tuple[MetricParams, ...]
    forms: Tuple[OneFormSpec, ...]
    norm: NormSpec = field(compare=False)
    norm_options: Mapping[str, object] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, document: Dict, overrides: Optional[Mapping[str, str]] = None,
                  source: str = "<document>") -> "SpaceSpecFile":
        """
        Schema check, then exact parsing and every structural and metric invariant
        :param document:
        :param overrides: parameter name -> rational string
        :param source: file name used in error messages
        :return:
        """
        error = best_match(Draft7Validator(SPACE_SCHEMA).iter_errors(document))
        if error is not None:
            path = _field_path(error.absolute_path)
            logger.error(f"{source}: field '{path}': {error.message}")
            raise SpaceSpecSyntaxError(f"{source}: field '{path}': {error.message}")

        parameters = _parameters(document, overrides, source)

        structure = {}
        for index, (a, b, entries) in enumerate(document["structure"]):
            if a >= b:
                logger.error(f"{source}: field 'structure[{index}]': store brackets with a < b, got ({a}, {b})")
                raise SpaceSpecSemanticError(f"{source}: field 'structure[{index}]': "
                                             f"store brackets with a < b, got ({a}, {b})")
            if (a, b) in structure:
                logger.error(f"{source}: field 'structure[{index}]': bracket ({a}, {b}) given twice")
                raise SpaceSpecSemanticError(f"{source}: field 'structure[{index}]': bracket ({a}, {b}) given twice")
            structure[(a, b)] = tuple((k, _rational(value, source, f"structure[{index}][2][{position}]"))
                                      for position, (k, value) in enumerate(entries))

        basis_change = None
        if "basis_change" in document:
            basis_change = tuple(_rationals(row, source, f"basis_change[{index}]")
                                 for index, row in enumerate(document["basis_change"]))

        with _semantic_field(source, "basis"):
            algebra = LieAlgebraSpec(len(document["basis"]), tuple(document["basis"]), structure)
        split = ReductiveSplit(tuple(document["h"]), tuple(document["m"]), basis_change)
        msplit = ModuleSplit(tuple(map(tuple, document["blocks"])), tuple(document["m"]))
        space = HomogeneousSpace(algebra, split, msplit,
                                 maximal_isometry_group=document.get("flags", {}).get("maximal_isometry_group",
                                                                                      False),
                                 name=document["name"])

        report = space.validate()
        if not report.ok:
            violation = report.violations[0]
            field_name = VIOLATION_FIELDS[violation.kind]
            logger.error(f"{source}: field '{field_name}': {violation.kind.value} violated, "
                         f"witness {violation.witness}: {violation.detail}")
            raise SpaceSpecSemanticError(f"{source}: field '{field_name}': {violation.kind.value} violated, "
                                         f"witness {violation.witness}: {violation.detail}")

        positions = msplit.block_positions
        if "block_forms" in document:
            if len(document["block_forms"]) != len(positions):
                logger.error(f"{source}: field 'block_forms': {len(document['block_forms'])} forms for "
                             f"{len(positions)} blocks")
                raise SpaceSpecSemanticError(f"{source}: field 'block_forms': one form per block expected")
            forms_of_blocks = []
            for index, rows in enumerate(document["block_forms"]):
                matrix = tuple(_rationals(row, source, f"block_forms[{index}][{r}]") for r, row in enumerate(rows))
                with _semantic_field(source, f"block_forms[{index}]"):
                    forms_of_blocks.append(BlockForm(index, matrix))
            with _semantic_field(source, "family"):
                family = MetricFamily(positions, tuple(forms_of_blocks), tuple(document["family"]))
        else:
            with _semantic_field(source, "family"):
                family = MetricFamily.standard(positions, tuple(document["family"]))

        metrics = []
        for index, entries in enumerate(document["metrics"]):
            values = _rationals(entries, source, f"metrics[{index}]", parameters)
            if len(values) != family.count:
                logger.error(f"{source}: field 'metrics[{index}]': {len(values)} coefficients for "
                             f"{family.count} blocks")
                raise SpaceSpecSemanticError(f"{source}: field 'metrics[{index}]': one coefficient per block expected")
            with _semantic_field(source, f"metrics[{index}]"):
                params = MetricParams(values)
            if family.symbol_values(params.c) is None:
                logger.error(f"{source}: field 'metrics[{index}]': not a member of the family {document['family']}")
                raise SpaceSpecSemanticError(f"{source}: field 'metrics[{index}]': "
                                             f"not a member of the family {document['family']}")
            metrics.append(params)

        forms = []
        for index, entries in enumerate(document.get("one_forms", [])):
            values = _rationals(entries, source, f"one_forms[{index}]", parameters)
            if len(values) != space.dim_m:
                logger.error(f"{source}: field 'one_forms[{index}]': {len(values)} entries, dim m = {space.dim_m}")
                raise SpaceSpecSemanticError(f"{source}: field 'one_forms[{index}]': one entry per m-coordinate")
            form = OneFormSpec(values)
            violations = form_invariance_violations(space, form)
            if violations:
                j, q, value = violations[0]
                detail = (f"beta([{space.h_labels[j]}, {space.m_labels[q]}]_m) = {format_rational(value)}, "
                          f"witness {(j, q)}")
                logger.error(f"{source}: field 'one_forms[{index}]': not Ad(H)-invariant, {detail}")
                raise SpaceSpecSemanticError(f"{source}: field 'one_forms[{index}]': not Ad(H)-invariant, {detail}")
            forms.append(form)

        norm = _build_norm(document, family, metrics, forms, parameters, source)

        logger.debug(f"Parsed space {document['name']} from {source}")
        return cls(name=document["name"], description=document.get("description", ""), space=space, family=family,
                   parameters=parameters, metrics=tuple(metrics), forms=tuple(forms), norm=norm,
                   norm_options=norm.to_dict())

    def to_dict(self) -> Dict:
        """
        Re-serialise with parameter references resolved
        :return:
        """
        algebra, split = self.space.algebra, self.space.split
        document = {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "description": self.description,
            "basis": list(algebra.basis_labels),
            "structure": [[a, b, [[k, format_rational(value)] for k, value in entries]]
                          for (a, b), entries in sorted(algebra.structure.items())],
            "h": list(split.h_indices),
            "m": list(split.m_indices),
            "blocks": [list(block) for block in self.space.msplit.blocks],
            "block_forms": [[[format_rational(entry) for entry in row] for row in form.matrix]
                            for form in self.family.block_forms],
            "family": list(self.family.coefficients),
            "parameters": {key: format_rational(value) for key, value in self.parameters.items()},
            "metrics": [[format_rational(entry) for entry in params.c] for params in self.metrics],
            "one_forms": [[format_rational(entry) for entry in form.covector] for form in self.forms],
            "norm": dict(self.norm_options),
            "flags": {"maximal_isometry_group": self.space.maximal_isometry_group},
        }
        if split.basis_change is not None:
            document["basis_change"] = [[format_rational(entry) for entry in row] for row in split.basis_change]
        return document


def parse_space(path: Path, overrides: Optional[Mapping[str, str]] = None) -> SpaceSpecFile:
    """
    Read and validate a space file
    :param path:
    :param overrides: parameter name -> rational string
    :return:
    """
    path = Path(path)
    if not path.is_file():
        logger.error(f"Space file {path} does not exist")
        raise SpaceSpecError(f"Space file {path} does not exist")

    with open(path, "r") as file_h:
        text = file_h.read()

    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        logger.error(f"{path}: line {error.lineno}, column {error.colno}: {error.msg}")
        raise SpaceSpecSyntaxError(f"{path}: line {error.lineno}, column {error.colno}: {error.msg}") from error

    return SpaceSpecFile.from_dict(document, overrides, source=str(path))


def get_catalog_dir() -> Path:
    """
    references/ next to the package unless GEOGRAPH_CATALOG_DIR points elsewhere
    :return:
    """
    catalog_dir = environ.get(CATALOG_DIR_ENV_VAR, None)
    if catalog_dir is None:
        return CATALOG_DIR
    if not Path(catalog_dir).is_dir():
        logger.error(f"{CATALOG_DIR_ENV_VAR} is set to {catalog_dir} which is not a directory")
        raise EnvironmentError(f"{CATALOG_DIR_ENV_VAR} is not a directory")
    return Path(catalog_dir)


def catalog_names() -> List[str]:
    return sorted(path.stem for path in get_catalog_dir().glob("*.json"))


def load_catalog_space(name: str, overrides: Optional[Mapping[str, str]] = None) -> SpaceSpecFile:
    """
    Built-in space by name
    :param name:
    :param overrides:
    :return:
    """
    path = get_catalog_dir() / f"{name}.json"
    if not path.is_file():
        logger.error(f"No catalog space named '{name}', choose one of {catalog_names()}")
        raise UnknownSpaceError(f"No catalog space named '{name}'")
    return parse_space(path, overrides)
