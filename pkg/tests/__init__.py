"""Test package initialization."""

