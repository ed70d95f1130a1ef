"""Exact tropical (min-plus) matrix rank theory."""
