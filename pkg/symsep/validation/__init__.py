"""Validation helpers for exported artifacts."""
