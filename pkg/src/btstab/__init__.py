"""Exact stabilizers of quadratic points on Bruhat-Tits trees over 2-adic fields."""
from .quadext import ExtCtx, classify_extensions, make_extension, parse_extension
from .ring import FieldCtx, make_base_field, parse_base
from .stab import brute_force_stabilizer, closed_form_stabilizer, verify_theorem

__version__ = "0.1.0"
__all__ = ["ExtCtx", "FieldCtx", "brute_force_stabilizer", "classify_extensions", "closed_form_stabilizer",
           "make_base_field", "make_extension", "parse_base", "parse_extension", "verify_theorem"]
