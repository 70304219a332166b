"""Sphinx configuration file for reflex's documentation."""

# -- General configuration ------------------------------------------------------------

extensions = [
    # first-party extensions
    "sphinx.ext.autodoc",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.napoleon",
    "sphinx.ext.viewcode",
    # third-party extensions
    "sphinxarg.ext",
]

# General information about the project.
project = "reflex"
author = "reflex developers"

# -- Options for HTML -----------------------------------------------------------------

html_title = project
html_theme = "furo"
html_theme_options = {
    "sidebar_hide_name": False,
}

# -- Options for smartquotes ----------------------------------------------------------

# Keep long options like "--budget-nodes" intact.
smartquotes_action = "qe"

# -- Options for intersphinx ----------------------------------------------------------

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "sympy": ("https://docs.sympy.org/latest", None),
}
