"""Eta and Theta functions on genus-2 Jacobians and (l,l)-isogenies."""

__version__ = "0.1.0"
