"""
Experiment configuration files.

Configurations are UTF-8 TOML documents; every validation error names the
file and the line of the offending key. The grammar is documented in
``docs/source/config.rst``.

Examples:
    .. code-block:: python

        config = parse_config('''
        [group]
        kind = "torus"

        [action]
        weights = [[1], [2]]

        [vector]
        re = [1, 1]
        ''', source="inline.toml")
        config.group.kind  # GroupKind.Torus
"""

import re
import sys
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Optional, TypeVar, Union

import numpy as np

from orbithull.lib.error import ValidationError
from orbithull.lib.gaussian import GaussianRational
from orbithull.lib.haar import (
    U64_MAX,
    CompactMatrixGroup,
    ComplexArray,
    GroupKind,
    Representation,
)
from orbithull.lib.lattice import WeightVector
from orbithull.lib.point import OrbitPoint

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

_T = TypeVar("_T")

_SECTIONS = frozenset(
    ("group", "action", "vector", "estimation", "tolerances", "flow", "pair", "gelfand", "output")
)
_HEADER = re.compile(r"^\s*\[\s*([A-Za-z0-9_.\-]+)\s*\]")
_KEY = re.compile(r"^\s*([A-Za-z0-9_\-]+)\s*=")
_SUBGROUPS = frozenset({"so2", "u1", "center", "full"})


@dataclass(frozen=True)
class GroupSpec:
    kind: GroupKind = GroupKind.Torus
    n: int = 1
    representation: Representation = Representation.Defining
    word_length: int = 20
    lie_basis: tuple[ComplexArray, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class EstimationSpec:
    degree_bound: int = 2
    samples: int = 100_000
    seed: int = 0
    monomial_cap: int = 5000


@dataclass(frozen=True)
class Tolerances:
    nilcone: float = 1e-3
    consistent: float = 5e-3
    refuted: float = 0.05
    zero: float = 1e-6
    gradient: float = 1e-8
    invariant: float = 1e-6
    gelfand: float = 0.05
    hull: float = 1e-10


@dataclass(frozen=True)
class PairSpec:
    algebra: Optional[str] = None
    subalgebra: Optional[str] = None
    rank: int = 1
    g_basis: tuple[ComplexArray, ...] = field(default=(), repr=False)
    h_basis: tuple[ComplexArray, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class GelfandSpec:
    family: str = "so3"
    degrees: tuple[Fraction, ...] = ()
    subgroup: Optional[str] = None


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A parsed and validated configuration.

    ``raw`` keeps the decoded TOML document for the report's config echo.
    """

    group: GroupSpec = GroupSpec()
    weights: tuple[WeightVector, ...] = ()
    vector: Optional[OrbitPoint] = None
    estimation: EstimationSpec = EstimationSpec()
    tolerances: Tolerances = Tolerances()
    max_iter: int = 10_000
    pair: PairSpec = PairSpec()
    gelfand: GelfandSpec = GelfandSpec()
    output: Optional[str] = None
    source: str = "<config>"
    raw: Mapping[str, Any] = field(default_factory=dict, repr=False)

    def build_group(self) -> CompactMatrixGroup:
        """
        Returns the configured group.

        Raises:
            ValidationError: The group section is incomplete.
        """
        spec = self.group
        if spec.kind is GroupKind.Torus:
            if not self.weights:
                raise ValidationError("a torus group needs [action] weights", source=self.source)
            return CompactMatrixGroup.torus(self.weights)
        if spec.kind is GroupKind.Unitary:
            return CompactMatrixGroup.unitary(spec.n, spec.representation)
        if spec.kind is GroupKind.SpecialUnitary:
            return CompactMatrixGroup.special_unitary(spec.n, spec.representation)
        if spec.kind is GroupKind.SpecialOrthogonal:
            return CompactMatrixGroup.special_orthogonal(spec.n, spec.representation)

        return CompactMatrixGroup.custom(spec.lie_basis, spec.word_length, spec.representation)

    def require_vector(self) -> OrbitPoint:
        if self.vector is None:
            raise ValidationError("this command needs a [vector] section", source=self.source)

        return self.vector

    def with_overrides(
        self,
        seed: Optional[int] = None,
        samples: Optional[int] = None,
        degree_bound: Optional[int] = None,
        output: Optional[str] = None,
    ) -> "ExperimentConfig":
        """
        Applies command line flags on top of the file values.

        Raises:
            ValidationError: An override is out of range.
        """
        est = self.estimation
        if seed is not None:
            _check(0 <= seed <= U64_MAX, "--seed must be an unsigned 64-bit integer")
            est = replace(est, seed=seed)
        if samples is not None:
            _check(samples >= 100, "--samples must be >= 100")
            est = replace(est, samples=samples)
        if degree_bound is not None:
            _check(degree_bound >= 1, "--degree-bound must be >= 1")
            est = replace(est, degree_bound=degree_bound)

        return replace(self, estimation=est, output=output if output is not None else self.output)

    def echo(self) -> dict[str, Any]:
        """
        Returns the configuration as plain JSON-ready data, overrides included.
        """
        doc = {k: dict(v) if isinstance(v, Mapping) else v for k, v in self.raw.items()}
        doc["estimation"] = {
            **doc.get("estimation", {}),
            "degree_bound": self.estimation.degree_bound,
            "samples": self.estimation.samples,
            "seed": self.estimation.seed,
        }

        return doc


def _check(ok: bool, message: str) -> None:
    if not ok:
        raise ValidationError(message)


class _Reader:
    def __init__(self, doc: Mapping[str, Any], text: str, source: str) -> None:
        self.doc = doc
        self.source = source
        self.lines: dict[tuple[str, str], int] = {}
        self.sections: dict[str, int] = {}

        section = ""
        for lineno, line in enumerate(text.splitlines(), start=1):
            if header := _HEADER.match(line):
                section = header.group(1)
                self.sections.setdefault(section, lineno)
            elif key := _KEY.match(line):
                self.lines.setdefault((section, key.group(1)), lineno)

    def fail(self, section: str, key: Optional[str], message: str) -> ValidationError:
        line = self.lines.get((section, key)) if key else None
        if line is None:
            line = self.sections.get(section)
        where = f"[{section}] {key}" if key else f"[{section}]"

        return ValidationError(f"{where}: {message}", line, self.source)

    def table(self, section: str) -> Mapping[str, Any]:
        tab = self.doc.get(section, {})
        if not isinstance(tab, Mapping):
            raise self.fail(section, None, "must be a table")

        return tab

    def get(
        self,
        section: str,
        key: str,
        kind: Callable[[Any, str], _T],
        default: _T,
        check: Optional[Callable[[_T], bool]] = None,
        requirement: str = "",
    ) -> _T:
        tab = self.table(section)
        if key not in tab:
            return default

        try:
            value = kind(tab[key], key)
        except (TypeError, ValueError, ZeroDivisionError) as err:
            raise self.fail(section, key, str(err)) from None
        if check is not None and not check(value):
            raise self.fail(section, key, f"must be {requirement}, got {tab[key]!r}")

        return value


def _int(value: Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"expected an integer, got {value!r}")

    return value


def _float(value: Any, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"expected a number, got {value!r}")

    return float(value)


def _str(value: Any, key: str) -> str:
    if not isinstance(value, str):
        raise TypeError(f"expected a string, got {value!r}")

    return value


def _enum(enum: Any) -> Callable[[Any, str], Any]:
    def parse(value: Any, key: str) -> Any:
        try:
            return enum(_str(value, key))
        except ValueError:
            choices = ", ".join(e.value for e in enum)
            raise ValueError(f"expected one of {choices}, got {value!r}") from None

    return parse


def _rational(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise TypeError(f"expected a rational, got {value!r}")
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)

    return Fraction(value)


def _scalar(value: Any) -> complex:
    if isinstance(value, list):
        if len(value) != 2:
            raise ValueError(f"complex entries are [re, im] pairs, got {value!r}")
        return complex(_float(value[0], ""), _float(value[1], ""))

    return complex(_float(value, ""))


def _matrices(value: Any, key: str) -> tuple[ComplexArray, ...]:
    if not isinstance(value, list):
        raise TypeError("expected a list of matrices")

    mats = []
    for k, mat in enumerate(value):
        if not isinstance(mat, list) or not all(isinstance(row, list) for row in mat):
            raise TypeError(f"matrix {k} must be a list of rows")
        rows = [[_scalar(x) for x in row] for row in mat]
        if any(len(row) != len(rows) for row in rows):
            raise ValueError(f"matrix {k} is not square")
        mats.append(np.array(rows, dtype=np.complex128))

    return tuple(mats)


def _weights(value: Any, key: str) -> tuple[WeightVector, ...]:
    if not isinstance(value, list) or not value:
        raise ValueError("expected a nonempty list of integer rows")

    rows = tuple(tuple(_int(x, key) for x in row) for row in value)
    if not rows[0] or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("weight rows must be nonempty and of equal length")

    return rows


def _numbers(value: Any, key: str) -> list[Any]:
    if not isinstance(value, list):
        raise TypeError(f"expected a list, got {value!r}")

    return value


def _vector(reader: _Reader) -> Optional[OrbitPoint]:
    tab = reader.table("vector")
    if not tab:
        return None

    exact = reader.get("vector", "exact", lambda v, k: v if isinstance(v, bool) else _int(v, k), False)
    re_part = reader.get("vector", "re", _numbers, [])
    im_part = reader.get("vector", "im", _numbers, [0] * len(re_part))
    if not re_part or len(im_part) != len(re_part):
        raise reader.fail("vector", "im" if re_part else "re", "re and im must be nonempty lists of equal length")

    try:
        if exact:
            return OrbitPoint.exact(
                GaussianRational(_rational(a), _rational(b)) for a, b in zip(re_part, im_part)
            )
        return OrbitPoint.of(complex(_float(a, "re"), _float(b, "im")) for a, b in zip(re_part, im_part))
    except (TypeError, ValueError, ZeroDivisionError) as err:
        raise reader.fail("vector", "re", str(err)) from None


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    """
    Parses and validates a configuration document.

    Arguments:
        text (str): The TOML text.
        source (str): A name for error messages, usually the file name.

    Returns:
        ExperimentConfig: The configuration.

    Raises:
        ValidationError: The document is not TOML or a value is malformed or out of range.
    """
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise ValidationError(f"not valid TOML: {err}", getattr(err, "lineno", None), source) from None

    reader = _Reader(doc, text, source)
    for section in doc:
        if section not in _SECTIONS:
            raise reader.fail(section, None, "unknown section")

    positive = ("a positive integer", lambda x: x >= 1)
    group = GroupSpec(
        kind=reader.get("group", "kind", _enum(GroupKind), GroupKind.Torus),
        n=reader.get("group", "n", _int, 1, positive[1], positive[0]),
        representation=reader.get("group", "representation", _enum(Representation), Representation.Defining),
        word_length=reader.get("group", "word_length", _int, 20, positive[1], positive[0]),
        lie_basis=reader.get("group", "lie_basis", _matrices, ()),
    )
    if group.kind is GroupKind.Custom and not group.lie_basis:
        raise reader.fail("group", "kind", "a custom group needs lie_basis")

    estimation = EstimationSpec(
        degree_bound=reader.get("estimation", "degree_bound", _int, 2, positive[1], positive[0]),
        samples=reader.get("estimation", "samples", _int, 100_000, lambda x: x >= 100, ">= 100"),
        seed=reader.get("estimation", "seed", _int, 0, lambda x: 0 <= x <= U64_MAX, "an unsigned 64-bit integer"),
        monomial_cap=reader.get("estimation", "monomial_cap", _int, 5000, positive[1], positive[0]),
    )

    defaults = Tolerances()
    tolerances = Tolerances(
        **{
            name: reader.get("tolerances", name, _float, getattr(defaults, name), lambda x: x > 0, "positive")
            for name in defaults.__dataclass_fields__
        }
    )
    if tolerances.consistent >= tolerances.refuted:
        raise reader.fail("tolerances", "consistent", "must be below the refuted threshold")

    pair = PairSpec(
        algebra=reader.get("pair", "algebra", _str, None),  # type: ignore[arg-type]
        subalgebra=reader.get("pair", "subalgebra", _str, None),  # type: ignore[arg-type]
        rank=reader.get("pair", "rank", _int, 1, positive[1], positive[0]),
        g_basis=reader.get("pair", "g_basis", _matrices, ()),
        h_basis=reader.get("pair", "h_basis", _matrices, ()),
    )

    degrees = reader.get(
        "gelfand", "degrees", lambda v, k: tuple(_rational(x) for x in _numbers(v, k)), ()
    )
    gelfand = GelfandSpec(
        family=reader.get("gelfand", "family", _str, "so3", lambda x: x in ("so3", "su2"), "so3 or su2"),
        degrees=degrees,
        subgroup=reader.get(
            "gelfand", "subgroup", _str, None, lambda x: x in _SUBGROUPS, "so2, u1, center or full"  # type: ignore[arg-type]
        ),
    )
    if any(d < 0 or (2 * d).denominator != 1 for d in degrees):
        raise reader.fail("gelfand", "degrees", "degrees must be nonnegative integers or half-integers")

    config = ExperimentConfig(
        group=group,
        weights=reader.get("action", "weights", _weights, ()),
        vector=_vector(reader),
        estimation=estimation,
        tolerances=tolerances,
        max_iter=reader.get("flow", "max_iter", _int, 10_000, positive[1], positive[0]),
        pair=pair,
        gelfand=gelfand,
        output=reader.get("output", "path", _str, None),  # type: ignore[arg-type]
        source=source,
        raw=doc,
    )

    if config.vector is not None and (group.kind is not GroupKind.Torus or config.weights):
        try:
            dim = config.build_group().dimension
        except ValidationError as err:
            raise reader.fail("group", "kind", str(err)) from None
        if len(config.vector) != dim:
            raise reader.fail(
                "vector", "re", f"vector of length {len(config.vector)} does not match representation dimension {dim}"
            )

    return config


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Reads and parses a configuration file.

    Raises:
        ValidationError: The file cannot be read or does not validate.
    """
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as err:
        raise ValidationError(f"cannot read configuration: {err}", source=str(p)) from None

    return parse_config(text, source=p.name)
