"""
Shared shape of the command line tools.

Each subcommand is a ``Tool`` subclass; the front end looks tools up by
``name``, groups them by ``category`` in ``--help`` and calls ``execute``
with a parsed configuration.

    .. code-block:: python

        class TorusAnalyze(Tool):
            name = "torus-analyze"
            category = Category.Exact.value
            label = "Torus orbit analysis"

            def execute(self, config: ExperimentConfig) -> ToolResult:
                ...
"""

from dataclasses import dataclass, field
from enum import Enum, unique
from typing import Any

from orbithull.lib.config import ExperimentConfig


@unique
class Category(Enum):
    Exact = "Exact Torus Tools"
    Numeric = "Numeric Orbit Tools"
    Structure = "Group Structure Tools"
    Gallery = "Fixture Gallery"


@dataclass
class ToolResult:
    """
    What a tool hands back to the command line front end.

    ``verdicts`` maps module names to JSON-ready sub-objects; ``inconclusive``
    is set when the evidence fell into a declared gray zone.
    """

    verdicts: dict[str, Any] = field(default_factory=dict)
    summary: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    inconclusive: bool = False
    failed: bool = False


class Tool:
    """
    Base class of every subcommand. Subclasses override the attributes and ``execute``.
    """

    name: str = ""
    category: str = ""
    label: str = ""
    description: str = ""

    def execute(self, config: ExperimentConfig) -> ToolResult:
        raise NotImplementedError(f"{type(self).__name__} does not implement execute")
