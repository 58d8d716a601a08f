"""Toolkit components."""
