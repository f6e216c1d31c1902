"""
The JSON report every command emits.

Floating values in verdicts never stand alone: they are wrapped as
``{"value": x, "standard_error": s}`` or ``{"value": x, "tolerance": t}``.
Exact rationals are strings ``"p/q"`` and complex numbers ``[re, im]``.

Examples:
    .. code-block:: python

        env = ReportEnvelope.new("torus-analyze", config.echo(), seed=0)
        env.verdicts["torus_orbit"] = {"antisymmetric": True}
        text = env.to_json()
        assert ReportEnvelope.from_json(text) == env
"""

import json
import re
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Union

import numpy as np

from orbithull.lib.error import ValidationError
from orbithull.lib.gaussian import GaussianRational

SCHEMA_VERSION: str = "1.0.0"
"""
Bumped on any change to the report fields.
"""

_SEMVER = re.compile(r"^\d+\.\d+\.\d+$")
_KEYS = ("schema_version", "command", "config", "verdicts", "provenance", "warnings")
_ANNOTATIONS = ("standard_error", "tolerance")

Json = Any


def rational_json(x: Union[int, Fraction]) -> str:
    return str(Fraction(x))


def complex_json(z: Union[complex, GaussianRational]) -> list[Json]:
    if isinstance(z, GaussianRational):
        return list(z.to_strings())

    z = complex(z)
    return [z.real, z.imag]


def vector_json(v: Sequence[Union[complex, GaussianRational]]) -> list[Json]:
    return [complex_json(z) for z in v]


def estimate_json(value: Union[float, complex, Sequence[complex]], standard_error: Union[float, Sequence[float]]) -> dict[str, Json]:
    """
    Wraps a Monte Carlo estimate with its standard error.
    """
    if isinstance(value, (complex, np.complexfloating)):
        val: Json = complex_json(complex(value))
    elif isinstance(value, (float, int, np.floating)):
        val = float(value)
    else:
        val = vector_json(list(value))

    se: Json = (
        float(standard_error)
        if isinstance(standard_error, (float, int, np.floating))
        else [float(s) for s in standard_error]
    )

    return {"value": val, "standard_error": se}


def tolerance_json(value: Union[float, complex], tolerance: float) -> dict[str, Json]:
    """
    Wraps a deterministic floating value with the tolerance it was judged by.
    """
    val: Json = complex_json(value) if isinstance(value, complex) else float(value)

    return {"value": val, "tolerance": float(tolerance)}


def _check_floats(node: Json, path: str) -> None:
    if isinstance(node, float):
        raise ValidationError(f"{path}: bare floating value without tolerance or standard error")
    if isinstance(node, dict):
        if any(k in node for k in _ANNOTATIONS):
            return
        for k, v in node.items():
            _check_floats(v, f"{path}.{k}")
    elif isinstance(node, list):
        for i, v in enumerate(node):
            _check_floats(v, f"{path}[{i}]")


@dataclass
class ReportEnvelope:
    """
    One command run: the config echo, per-module verdicts, provenance and warnings.
    """

    command: str
    config: dict[str, Json]
    verdicts: dict[str, Json] = field(default_factory=dict)
    provenance: dict[str, Json] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    @classmethod
    def new(
        cls,
        command: str,
        config: dict[str, Json],
        seed: Optional[int] = None,
        samples: Optional[int] = None,
        degree_bound: Optional[int] = None,
        threads: Optional[int] = None,
    ) -> "ReportEnvelope":
        return cls(
            command,
            config,
            provenance={
                "seed": seed,
                "samples": samples,
                "degree_bound": degree_bound,
                "threads": threads,
                "wall_time_s": None,
            },
        )

    def warn(self, message: str) -> None:
        if message not in self.warnings:
            self.warnings.append(message)

    def to_dict(self, exclude_wall_time: bool = False) -> dict[str, Json]:
        provenance = dict(self.provenance)
        if exclude_wall_time:
            provenance.pop("wall_time_s", None)

        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "config": self.config,
            "verdicts": self.verdicts,
            "provenance": provenance,
            "warnings": list(self.warnings),
        }

    def to_json(self, exclude_wall_time: bool = False) -> str:
        """
        Serializes with sorted keys, so equal envelopes give identical text.

        Raises:
            ValidationError: A verdict holds a bare floating value.
        """
        _check_floats(self.verdicts, "verdicts")

        return json.dumps(
            self.to_dict(exclude_wall_time), indent=2, sort_keys=True, allow_nan=False
        )

    @classmethod
    def from_json(cls, text: str) -> "ReportEnvelope":
        """
        Parses and validates a serialized envelope.

        Raises:
            ValidationError: The text is not a valid envelope.
        """
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise ValidationError(f"report is not JSON: {err}", err.lineno) from None

        if not isinstance(doc, dict):
            raise ValidationError("report must be a JSON object")
        missing = [k for k in _KEYS if k not in doc]
        if missing:
            raise ValidationError(f"report is missing {', '.join(missing)}")
        if not isinstance(doc["schema_version"], str) or not _SEMVER.match(doc["schema_version"]):
            raise ValidationError(f"schema_version {doc['schema_version']!r} is not a semantic version")
        for key in ("config", "verdicts", "provenance"):
            if not isinstance(doc[key], dict):
                raise ValidationError(f"{key} must be an object")
        if not isinstance(doc["command"], str):
            raise ValidationError("command must be a string")
        if not isinstance(doc["warnings"], list) or not all(isinstance(w, str) for w in doc["warnings"]):
            raise ValidationError("warnings must be a list of strings")
        _check_floats(doc["verdicts"], "verdicts")

        return cls(
            command=doc["command"],
            config=doc["config"],
            verdicts=doc["verdicts"],
            provenance=doc["provenance"],
            warnings=doc["warnings"],
            schema_version=doc["schema_version"],
        )
