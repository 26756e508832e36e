__all__ = ['core', 'media', 'greens', 'nonlinear', 'diagrams', 'squeezing', 'scenario', 'cli']
__author__ = 'chi2path developers'
__version__ = '1.0.0'
