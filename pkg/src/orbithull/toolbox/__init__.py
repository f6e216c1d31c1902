"""
The tools, keyed by their command name.
"""

from orbithull.lib.tool import Tool
from orbithull.toolbox.fixtures.tool import Fixtures
from orbithull.toolbox.group_structure.tool import GroupCheckF, GroupGelfand
from orbithull.toolbox.orbit_defect.tool import OrbitDefect
from orbithull.toolbox.orbit_flow.tool import OrbitFlow
from orbithull.toolbox.torus_analyze.tool import TorusAnalyze

TOOLS: dict[str, type[Tool]] = {
    t.name: t for t in (TorusAnalyze, OrbitDefect, OrbitFlow, GroupCheckF, GroupGelfand, Fixtures)
}
