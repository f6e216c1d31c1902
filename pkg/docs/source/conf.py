import sys
from pathlib import Path

from sphinx_pyproject import SphinxConfig

_ROOT = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(_ROOT / "src"))

# metadata comes from pyproject.toml
_meta = SphinxConfig(pyproject_file=str(_ROOT / "pyproject.toml"))
project = _meta.name
author = _meta.author
release = version = _meta.version

extensions = [
    "autoapi.extension",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
]
templates_path = ["_templates"]

napoleon_google_docstring = True
napoleon_numpy_docstring = False
napoleon_use_rtype = False

autoapi_type = "python"
autoapi_dirs = [str(_ROOT / "src" / "orbithull")]
autoapi_root = "api-reference"
autoapi_template_dir = "_templates/_autoapi_templates"
autoapi_member_order = "groupwise"
autoapi_options = [
    "members",
    "undoc-members",
    "show-inheritance",
    "show-module-summary",
]

rst_epilog = ".. include:: /include/links.rst"

html_theme = "furo"
html_title = f"{project} {version}"
html_theme_options = {
    "navigation_with_keys": True,
    "top_of_page_button": None,
}
