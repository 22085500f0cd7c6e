"""
Risk-table construction from right-censored observations
"""
