"""
Monte Carlo validation of the analytic variances
"""
