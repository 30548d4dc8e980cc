# -*- coding: utf-8 -*-
#
# wpcapy documentation build configuration file.

import os
import sys
sys.path.insert(0, os.path.abspath('../'))

extensions = ['sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'sphinx.ext.mathjax']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'wpcapy'
copyright = u'2026, wpcapy developers'
author = u'wpcapy developers'

version = u'0.1.0'
release = u'0.1.0'

language = None
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = False

autodoc_member_order = 'bysource'

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
html_sidebars = {
    '**': [
        'relations.html',
        'searchbox.html',
    ]
}
htmlhelp_basename = 'wpcapydoc'

latex_documents = [
    (master_doc, 'wpcapy.tex', u'wpcapy Documentation',
     u'wpcapy developers', 'manual'),
]

man_pages = [
    (master_doc, 'wpcapy', u'wpcapy Documentation',
     [author], 1)
]

texinfo_documents = [
    (master_doc, 'wpcapy', u'wpcapy Documentation',
     author, 'wpcapy', 'Optimally weighted PCA for heteroscedastic data.',
     'Miscellaneous'),
]
