# Configuration file for the Sphinx documentation builder.
#
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import re
import sys

sys.path.insert(0, os.path.abspath('../..'))

# -- Project information -----------------------------------------------------

project = 'Toric Residues'
copyright = '2026, Toric Residues developers'
author = 'Toric Residues developers'

# The full version, including alpha/beta/rc tags
with open(os.path.abspath('../../toric_residues/__init__.py'), encoding='utf8') as f:
    release = re.search(r'__version__ = "(.*?)"', f.read()).group(1)

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosectionlabel'
]

templates_path = ['_templates']

exclude_patterns = ["build"]

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'

html_static_path = ['_static']
