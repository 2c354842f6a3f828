"""Reed-Solomon erasure codes over GF(65537) built on the Fermat number transform.

The codec module holds the encoders and decoders, shardio the on-disk format
and cli the ``fntec`` command.
"""
from .codec import (CodeParams, Codeword, decode, decode_direct, decode_nonsystematic,
                    decode_systematic, encode, encode_nonsystematic, encode_systematic,
                    encode_systematic_direct, encode_systematic_intermediate_direct)
from .errors import FNTCodeError, ShardFormatError
from .field import P
from .interp import build_plan, get_decode_plan, interpolate, lagrange_oracle
from .transform import FntCounter, count_fnts, fnt_forward, fnt_inverse, get_plan

__version__ = "0.1.0"

__all__ = [
    "P", "CodeParams", "Codeword", "FntCounter", "FNTCodeError", "ShardFormatError",
    "build_plan", "count_fnts", "decode", "decode_direct", "decode_nonsystematic",
    "decode_systematic", "encode", "encode_nonsystematic", "encode_systematic",
    "encode_systematic_direct", "encode_systematic_intermediate_direct", "fnt_forward",
    "fnt_inverse", "get_decode_plan", "get_plan", "interpolate", "lagrange_oracle",
]
