"""
Export module for estimate tables, figures and simulation reports
"""
