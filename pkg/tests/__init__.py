"""Tests for commutclass."""
