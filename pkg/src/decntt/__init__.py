"""Exact multiplication of big decimal integers with two-prime NTTs."""
from .decmul import DecimalNumber, OperandTooLarge, multiply, select_base_and_length
from .modword import AdjustStrategy, set_default_strategy

__all__ = [
    "AdjustStrategy",
    "DecimalNumber",
    "OperandTooLarge",
    "multiply",
    "select_base_and_length",
    "set_default_strategy",
]
