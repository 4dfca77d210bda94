"""Commutclass - observables that stop failing to commute as time runs to infinity."""

__version__ = "0.1.0"
