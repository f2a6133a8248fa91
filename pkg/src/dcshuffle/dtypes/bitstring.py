""" :mod:`dcshuffle.dtypes.bitstring`

Hex encoding of bit arrays used in shuffle transcripts.
"""
import numpy as np
import numpy.typing as npt

BitArray = npt.NDArray[np.uint8]


def encode_bits(bits: BitArray) -> str:
    """Pack a 0/1 array MSB-first into bytes and return the hex string.

    The final byte is zero-padded; the bit length must be stored alongside.
    """
    return bytes(np.packbits(np.asarray(bits, dtype=np.uint8))).hex()


def decode_bits(text: str, nbits: int) -> BitArray:
    """Inverse of :func:`encode_bits`."""
    raw = np.frombuffer(bytes.fromhex(text), dtype=np.uint8)
    bits = np.unpackbits(raw)
    if bits.size < nbits:
        raise ValueError(f"Hex string holds {bits.size} bits, expected {nbits}")
    return bits[:nbits].astype(np.uint8)


def bits_to_int(text: str, nbits: int) -> int:
    """Read an encoded bit string as an integer, first bit most significant."""
    raw = bytes.fromhex(text)
    pad = 8 * len(raw) - nbits
    if pad < 0:
        raise ValueError(f"Hex string holds {8 * len(raw)} bits, expected {nbits}")
    return int.from_bytes(raw, "big") >> pad
