"""Symbol alphabet, Gödel codes and the ★ concatenation on codes.

A code is read in binary as a run of chunks ``1 0^k``; chunk ``k`` is the
symbol with code ``2**k``.  Every positive integer therefore spells a word
over an infinite alphabet, and ★ on codes is concatenation of those words.
`chunks` exposes that word as a Python string so the arithmetic evaluators
can use ``str`` operations instead of bit fiddling.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

SYMBOLS = "′0(){}[]+·=⇒∧∨¬∀∃,"
CODE = {s: 1 << k for k, s in enumerate(SYMBOLS)}
INDEX = {s: k for k, s in enumerate(SYMBOLS)}

# Sequence markers used by the construction-sequence machinery.
MARK_S = 1 << 18
MARK_T = 1 << 19

DEFAULT_MAX_BITS = 50_000_000

_BITS = {ord(s): "1" + "0" * k for k, s in enumerate(SYMBOLS)}
_CHUNK = re.compile("10*")
_EXTRA_BASE = 0x10000
_EXTRA_LIMIT = 0x10FFFF - _EXTRA_BASE


class DecodeError(ValueError):
    """The integer is not the code of a string over the symbol alphabet."""


class GuardError(RuntimeError):
    """A materialization would exceed the configured size guard."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: {size} exceeds guard {limit}")
        self.size = size
        self.limit = limit


def ell(x: int) -> int:
    """Binary length; ell(0) == 0."""
    return x.bit_length()


def star(*xs: int) -> int:
    """n ★ m = n * 2**ell(m) + m, folded left over the arguments."""
    acc = 0
    for x in xs:
        acc = (acc << x.bit_length()) | x
    return acc


# --- chunk words ---------------------------------------------------------

def chunk_char(k: int) -> str:
    if k < 18:
        return SYMBOLS[k]
    if k > _EXTRA_LIMIT:
        raise GuardError("chunk exponent", k, _EXTRA_LIMIT)
    return chr(_EXTRA_BASE + k)


def chunk_exp(c: str) -> int:
    k = INDEX.get(c)
    return k if k is not None else ord(c) - _EXTRA_BASE


def chunks(x: int) -> str:
    """The chunk word of x; the empty string for 0."""
    if x < 0:
        raise ValueError("codes are natural numbers")
    if x == 0:
        return ""
    return "".join(chunk_char(len(m) - 1) for m in _CHUNK.findall(bin(x)[2:]))


def from_chunks(w: str) -> int:
    if not w:
        return 0
    bits = "".join("1" + "0" * chunk_exp(c) for c in w)
    return int(bits, 2)


def is_symbol_word(w: str) -> bool:
    return all(c in INDEX for c in w)


# --- ropes ---------------------------------------------------------------

Part = Union[str, int]


@dataclass(frozen=True)
class Rope:
    """A symbol string kept as segments; an int segment is a run of primes.

    Lets formulas containing numerals with astronomically many primes be
    measured and compared without being spelled out.
    """

    parts: tuple[Part, ...] = ()

    @staticmethod
    def of(*items: Union[str, int, "Rope"]) -> "Rope":
        out: list[Part] = []
        for it in items:
            segs: Iterable[Part] = it.parts if isinstance(it, Rope) else (it,)
            for p in segs:
                if isinstance(p, int):
                    if p < 0:
                        raise ValueError("negative prime run")
                    if p == 0:
                        continue
                    if out and isinstance(out[-1], int):
                        out[-1] += p
                        continue
                elif not p:
                    continue
                elif out and isinstance(out[-1], str):
                    out[-1] += p
                    continue
                out.append(p)
        return Rope(tuple(out))

    @staticmethod
    def primes_after_zero(n: int) -> "Rope":
        return Rope.of("0", n)

    def __add__(self, other: Union[str, int, "Rope"]) -> "Rope":
        return Rope.of(self, other)

    def __radd__(self, other: Union[str, int]) -> "Rope":
        return Rope.of(other, self)

    def __len__(self) -> int:
        return sum(p if isinstance(p, int) else len(p) for p in self.parts)

    def bit_length(self) -> int:
        total = 0
        for p in self.parts:
            if isinstance(p, int):
                total += p
            else:
                total += sum(INDEX[c] + 1 for c in p)
        return total

    def text(self, max_len: int | None = DEFAULT_MAX_BITS) -> str:
        n = len(self)
        if max_len is not None and n > max_len:
            raise GuardError("rope length", n, max_len)
        return "".join("′" * p if isinstance(p, int) else p for p in self.parts)

    def bits(self, max_bits: int | None = DEFAULT_MAX_BITS) -> str:
        n = self.bit_length()
        if max_bits is not None and n > max_bits:
            raise GuardError("code bit length", n, max_bits)
        return "".join("1" * p if isinstance(p, int) else p.translate(_BITS)
                       for p in self.parts)

    def split(self, sep: str) -> list["Rope"]:
        """Split on a single symbol, like str.split."""
        out: list[list[Part]] = [[]]
        for p in self.parts:
            if isinstance(p, int):
                out[-1].append(p)
                continue
            pieces = p.split(sep)
            out[-1].append(pieces[0])
            for piece in pieces[1:]:
                out.append([piece])
        return [Rope.of(*segs) for segs in out]

    def __str__(self) -> str:
        return "".join(f"′^{p}" if isinstance(p, int) else p for p in self.parts)


# --- codes ---------------------------------------------------------------

def encode(s: Union[str, Rope], max_bits: int | None = None) -> int:
    """Gödel number of a symbol string (or rope)."""
    if isinstance(s, Rope):
        bits = s.bits(DEFAULT_MAX_BITS if max_bits is None else max_bits)
    else:
        bad = [c for c in s if c not in INDEX]
        if bad:
            raise ValueError(f"not a symbol: {bad[0]!r}")
        bits = s.translate(_BITS)
        if max_bits is not None and len(bits) > max_bits:
            raise GuardError("code bit length", len(bits), max_bits)
    return int(bits, 2) if bits else 0


def decode(x: int) -> str:
    """Inverse of `encode`; raises DecodeError off the image."""
    w = chunks(x)
    for i, c in enumerate(w):
        if c not in INDEX:
            raise DecodeError(f"chunk {i} has exponent {chunk_exp(c)} (no such symbol)")
    return w


def code_of(x: Union[int, str, Rope], max_bits: int | None = None) -> int:
    if isinstance(x, int):
        return x
    return encode(x, max_bits)


def numeral_code(a: int, max_bits: int | None = DEFAULT_MAX_BITS) -> int:
    """Code of the numeral 0 followed by a primes: 3 * 2**a - 1."""
    if a < 0:
        raise ValueError("numerals are for natural numbers")
    if max_bits is not None and a + 2 > max_bits:
        raise GuardError("numeral bit length", a + 2, max_bits)
    return 3 * (1 << a) - 1
