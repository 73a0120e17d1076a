"""Toolkit for the cirquent calculus CL15: parsing, proof checking,
game semantics, strategy extraction, and simulated-play validation."""

__version__ = "0.1.0"
