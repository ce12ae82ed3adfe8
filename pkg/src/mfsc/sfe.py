"""Shannon-Fano-Elias block codes over exact rational measures on ``Sigma^k``.

Blocks are ordered lexicographically by the alphabet's declared order.  The
codeword of ``w`` is the first ``1 + ceil(-log2 p(w))`` bits of the binary
expansion of ``F(w) = sum_{y < w} p(y) + p(w)/2``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping, Sequence


class CodecError(ValueError):
    pass


class UnknownBlock(CodecError):
    pass


class NoMatch(CodecError):
    pass


class LengthMismatch(CodecError):
    pass


def ceil_neg_log2(p: Fraction) -> int:
    """Smallest ``m >= 0`` with ``2**m * p >= 1``, for ``0 < p <= 1``."""
    p = Fraction(p)
    if not 0 < p <= 1:
        raise ValueError(f"probability out of range: {p}")
    a, b = p.numerator, p.denominator
    m = max(0, b.bit_length() - a.bit_length() - 1)
    while (a << m) < b:
        m += 1
    return m


def binary_digits(x: Fraction, length: int) -> str:
    """First ``length`` bits after the binary point of ``x`` in [0, 1)."""
    if length == 0:
        return ""
    v = (x.numerator << length) // x.denominator
    return format(v, f"0{length}b")


def bits_value(bits: str) -> Fraction:
    return Fraction(int(bits, 2), 1 << len(bits)) if bits else Fraction(0)


class BlockCode:
    """SFE code for a strictly positive measure on ``Sigma^k``.

    The measure is given by its next-symbol conditionals: ``conditional(prefix)``
    returns the distribution of the next symbol after ``prefix`` (a tuple of
    fewer than ``k`` symbols).  Cylinder and cumulative masses are then
    products along a single root-to-leaf path, so codewords never need the
    whole ``|Sigma|^k`` table.
    """

    def __init__(self, alphabet: Sequence, k: int,
                 conditional: Callable[[tuple], Mapping]):
        if k < 1:
            raise ValueError("block length must be positive")
        self.alphabet = tuple(alphabet)
        self.k = k
        self._conditional = conditional
        self._cache: dict[tuple, Mapping] = {}

    @classmethod
    def from_table(cls, alphabet: Sequence, k: int, table: Mapping) -> "BlockCode":
        alphabet = tuple(alphabet)
        probs = {tuple(w): Fraction(p) for w, p in table.items()}
        if set(probs) != set(product(alphabet, repeat=k)):
            raise ValueError("measure must be defined on exactly Sigma^k")
        if any(p <= 0 for p in probs.values()):
            raise ValueError("SFE needs strictly positive probabilities")
        if sum(probs.values()) != 1:
            raise ValueError(f"measure sums to {sum(probs.values())}")
        mass: dict[tuple, Fraction] = {}
        for w, p in probs.items():
            for i in range(k + 1):
                mass[w[:i]] = mass.get(w[:i], Fraction(0)) + p

        def conditional(prefix):
            return {a: mass[prefix + (a,)] / mass[prefix] for a in alphabet}

        return cls(alphabet, k, conditional)

    def conditional(self, prefix: tuple) -> Mapping:
        row = self._cache.get(prefix)
        if row is None:
            row = self._cache[prefix] = self._conditional(prefix)
        return row

    def _locate(self, w: tuple) -> tuple[Fraction, Fraction]:
        """``(sum_{y < w} p(y), p(w))``."""
        if len(w) != self.k or any(a not in self.alphabet for a in w):
            raise UnknownBlock(f"{w!r} is not a block in Sigma^{self.k}")
        lo, p = Fraction(0), Fraction(1)
        for i, a in enumerate(w):
            row = self.conditional(w[:i])
            for b in self.alphabet:
                if b == a:
                    break
                lo += p * row[b]
            p *= row[a]
        return lo, p

    def probability(self, w: Sequence) -> Fraction:
        return self._locate(tuple(w))[1]

    def codeword_length(self, w: Sequence) -> int:
        return 1 + ceil_neg_log2(self.probability(w))

    def encode(self, w: Sequence) -> str:
        lo, p = self._locate(tuple(w))
        length = 1 + ceil_neg_log2(p)
        return binary_digits(lo + p / 2, length)

    def decode(self, bits: str) -> tuple[tuple, int]:
        """Return ``(block, consumed)`` for the codeword at the start of ``bits``.

        The first ``N`` bits, read as a binary fraction, lie inside the
        interval of the encoded block as soon as ``N`` reaches its codeword
        length; a tree descent finds that block and the candidate is then
        checked against the stream.  ``N`` doubles until the stream is used up.
        """
        width = 64
        while True:
            x = bits_value(bits[:width])
            w = self._descend(x)
            cw = self.encode(w)
            if bits.startswith(cw):
                return w, len(cw)
            if width >= len(bits):
                raise NoMatch(f"no codeword is a prefix of {bits[:32]!r}...")
            width *= 2

    def _descend(self, x: Fraction) -> tuple:
        lo, p = Fraction(0), Fraction(1)
        w: tuple = ()
        for _ in range(self.k):
            row = self.conditional(w)
            chosen = self.alphabet[-1]
            for b in self.alphabet:
                mass = p * row[b]
                if x < lo + mass:
                    chosen = b
                    break
                lo += mass
            else:
                lo -= p * row[chosen]
            p *= row[chosen]
            w += (chosen,)
        return w

    def blocks(self) -> Iterator[tuple]:
        return product(self.alphabet, repeat=self.k)

    def codebook(self) -> dict[tuple, str]:
        return {w: self.encode(w) for w in self.blocks()}


def sfe_encode(code: BlockCode, w: Sequence) -> str:
    return code.encode(w)


def sfe_decode(code: BlockCode, bits: str) -> tuple[tuple, int]:
    return code.decode(bits)


def is_prefix_free(words: Iterable[str]) -> bool:
    ordered = sorted(words)
    return all(not b.startswith(a) for a, b in zip(ordered, ordered[1:]))


def kraft_sum(words: Iterable[str]) -> Fraction:
    return sum((Fraction(1, 1 << len(c)) for c in words), Fraction(0))


# -- packed binary dumps ------------------------------------------------------

def pack_bits(bits: str) -> bytes:
    """Big-endian bit packing behind an 8-byte big-endian length prefix."""
    n = len(bits)
    padded = bits + "0" * (-n % 8)
    body = int(padded, 2).to_bytes(len(padded) // 8, "big") if padded else b""
    return n.to_bytes(8, "big") + body


def unpack_bits(data: bytes) -> str:
    n = int.from_bytes(data[:8], "big")
    body = data[8:]
    if len(body) * 8 < n:
        raise LengthMismatch("packed payload shorter than its length prefix")
    return format(int.from_bytes(body, "big"), f"0{len(body) * 8}b")[:n] if n else ""
