# Sphinx configuration for the silverlab docs.
#
# Build with `sphinx-build docs docs/_build`. The API page pulls docstrings
# from the installed package, or from the checkout when it is not installed.
import os
import sys

sys.path.insert(0, os.path.abspath(".."))

from silverlab import __version__  # noqa: E402

project = "silverlab"
copyright = "2020, silverlab developers"
author = "silverlab developers"
version = release = __version__

extensions = [
    "sphinx.ext.autodoc",
    "recommonmark",
]

# experiment classes document their knobs in numpy-style "Attributes" blocks
autodoc_member_order = "bysource"
autodoc_default_options = {"members": True, "undoc-members": False}

exclude_patterns = ["_build"]

html_theme = "alabaster"

source_suffix = {
    ".rst": "restructuredtext",
    ".md": "markdown",
}
