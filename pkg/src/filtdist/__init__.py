"""Exact filtrations, Groebner-Shirshov bases and distortion functions."""

__version__ = "0.1.0"
