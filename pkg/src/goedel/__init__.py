"""Gödel numbering, formal arithmetic and incompleteness constructions."""
from .numbering import encode, decode, star, ell, numeral_code, Rope

__all__ = ["encode", "decode", "star", "ell", "numeral_code", "Rope"]
__version__ = "0.1.0"
