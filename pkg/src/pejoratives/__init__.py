"""Toolkit for disambiguating polysemic Italian epithets at the word level and
measuring how injecting the resolved connotation changes sentence-level
misogyny classification."""

__version__ = "0.1.0"
