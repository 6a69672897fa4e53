"""Certified counting and stability of positive steady states of polynomial
reaction networks with one free conservation parameter."""

__version__ = "0.1.0"
