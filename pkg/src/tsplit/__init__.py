"""Desk-scale exact toolkit for Hilbert coefficients, syzygies, Tor-length
invariants and T-split extensions over local quotients of polynomial rings."""

__version__ = "0.1.0"
