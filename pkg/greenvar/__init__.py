"""
greenvar
Kaplan-Meier survival, Greenwood variance and the variance of the Greenwood estimator
"""

__version__ = "1.0.0"
__author__ = "greenvar developers"
