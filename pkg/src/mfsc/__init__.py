"""Multihead finite-state compressors and gamblers with exact-arithmetic constructions."""

from .machine import COMPRESSOR, GAMBLER, MachineSpec, validate_machine
from .construct import compressor_to_gambler, gambler_to_compressor, make_non_vanishing
from .gale import martingale_value, sgale_value
from .seqgen import generate, parse_sequence

__all__ = [
    "COMPRESSOR", "GAMBLER", "MachineSpec", "validate_machine",
    "compressor_to_gambler", "gambler_to_compressor", "make_non_vanishing",
    "martingale_value", "sgale_value", "generate", "parse_sequence",
]
