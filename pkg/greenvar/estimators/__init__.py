"""
Kaplan-Meier, Greenwood and R-hat estimators
"""
