"""Exact tropical (min-plus) linear algebra."""
