"""
Data models and JSON Schemas
"""
