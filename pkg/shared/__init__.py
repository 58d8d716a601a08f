"""Shared package initialization."""
