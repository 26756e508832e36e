# -*- coding: utf-8 -*-
"""
.. codeauthor:: chi2path developers
"""
from .version import __all__, __author__, __version__
