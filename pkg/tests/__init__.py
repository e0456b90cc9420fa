"""Tests for altgda."""
