"""Sign and binary coefficient sequences.

A :class:`SignSequence` holds the +/-1 coefficients of a Littlewood polynomial,
a :class:`BinarySequence` the 0/1 coefficients of a Newman-Bourgain polynomial.
Both are immutable wrappers around a small integer numpy array.

Text form uses ``+``/``-`` for signs and ``0``/``1`` for bits.  The binary file
form is an 8-byte little-endian unsigned count followed by the bits packed
little-endian (bit 1 stands for ``+1`` in a sign sequence).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._validation import ValidationError


class ClassViolationError(ValidationError):
    """Raised when a sequence does not belong to the Littlewood / Newman-Bourgain class."""


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SignSequence:
    """A finite sequence of signs eps_j in {-1, +1}.

    ``littlewood_class`` marks membership in the class used by the
    correspondence: both end coefficients equal +1.
    """

    coeffs: np.ndarray
    littlewood_class: bool = False

    def __post_init__(self):
        arr = np.asarray(self.coeffs)
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("a sign sequence needs length q >= 1")
        if not np.all((arr == 1) | (arr == -1)):
            raise ValidationError("sign sequence entries must be exactly -1 or +1")
        arr = arr.astype(np.int64)
        if self.littlewood_class and not (arr[0] == 1 and arr[-1] == 1):
            raise ClassViolationError("Littlewood class requires eps_0 = eps_{q-1} = +1")
        object.__setattr__(self, "coeffs", _readonly(arr))

    @classmethod
    def from_string(cls, text: str, littlewood_class: bool = False) -> "SignSequence":
        text = "".join(text.split())
        bad = set(text) - {"+", "-"}
        if bad:
            raise ValidationError(f"sign strings use only '+' and '-', got {sorted(bad)}")
        return cls(np.array([1 if ch == "+" else -1 for ch in text]), littlewood_class)

    @property
    def q(self) -> int:
        return int(self.coeffs.size)

    def in_littlewood_class(self) -> bool:
        return bool(self.coeffs[0] == 1 and self.coeffs[-1] == 1)

    def to_string(self) -> str:
        return "".join("+" if c > 0 else "-" for c in self.coeffs)

    def negated(self) -> "SignSequence":
        return SignSequence(-self.coeffs)

    def reversed(self) -> "SignSequence":
        return SignSequence(self.coeffs[::-1])

    def __len__(self) -> int:
        return self.q

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignSequence):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash(self.coeffs.tobytes())

    def __repr__(self) -> str:
        return f"SignSequence('{self.to_string()}')"


@dataclass(frozen=True, eq=False)
class BinarySequence:
    """A finite 0/1 sequence with its support set ``H`` and count of ones ``m``."""

    bits: np.ndarray
    nb_class: bool = False
    m: int = field(init=False)
    H: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        arr = np.asarray(self.bits)
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("a binary sequence needs length q >= 1")
        if not np.all((arr == 0) | (arr == 1)):
            raise ValidationError("binary sequence entries must be exactly 0 or 1")
        arr = arr.astype(np.int64)
        if self.nb_class and not (arr[0] == 1 and arr[-1] == 1):
            raise ClassViolationError("Newman-Bourgain class requires eta_0 = eta_{q-1} = 1")
        object.__setattr__(self, "bits", _readonly(arr))
        object.__setattr__(self, "m", int(arr.sum()))
        object.__setattr__(self, "H", _readonly(np.flatnonzero(arr)))

    @classmethod
    def from_string(cls, text: str, nb_class: bool = False) -> "BinarySequence":
        text = "".join(text.split())
        bad = set(text) - {"0", "1"}
        if bad:
            raise ValidationError(f"bit strings use only '0' and '1', got {sorted(bad)}")
        return cls(np.array([int(ch) for ch in text]), nb_class)

    @property
    def q(self) -> int:
        return int(self.bits.size)

    def in_nb_class(self) -> bool:
        return bool(self.bits[0] == 1 and self.bits[-1] == 1)

    def to_string(self) -> str:
        return "".join(str(int(b)) for b in self.bits)

    def __len__(self) -> int:
        return self.q

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinarySequence):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())

    def __repr__(self) -> str:
        return f"BinarySequence('{self.to_string()}')"


def parse_sequence(text: str) -> SignSequence | BinarySequence:
    """Parse a ``+/-`` string into signs or a ``0/1`` string into bits."""
    stripped = "".join(text.split())
    if stripped and set(stripped) <= {"+", "-"}:
        return SignSequence.from_string(stripped)
    if stripped and set(stripped) <= {"0", "1"}:
        return BinarySequence.from_string(stripped)
    raise ValidationError("sequence text must be all '+'/'-' or all '0'/'1'")


def random_signs(q: int, rng: np.random.Generator, littlewood_class: bool = False) -> SignSequence:
    signs = rng.choice(np.array([-1, 1]), size=q)
    if littlewood_class:
        signs[0] = 1
        signs[-1] = 1
    return SignSequence(signs, littlewood_class)


# -- bitset files -----------------------------------------------------------

_COUNT = struct.Struct("<Q")


def pack_bits(bits: np.ndarray) -> bytes:
    bits = np.asarray(bits, dtype=np.uint8)
    return _COUNT.pack(bits.size) + np.packbits(bits, bitorder="little").tobytes()


def unpack_bits(payload: bytes) -> np.ndarray:
    if len(payload) < _COUNT.size:
        raise ValidationError("bitset payload shorter than its 8-byte length header")
    (count,) = _COUNT.unpack_from(payload)
    body = np.frombuffer(payload, dtype=np.uint8, offset=_COUNT.size)
    if body.size * 8 < count:
        raise ValidationError(f"bitset header claims {count} bits but only {body.size * 8} present")
    return np.unpackbits(body, count=count, bitorder="little").astype(np.int64)


def write_bitset(path: str | Path, seq: SignSequence | BinarySequence) -> None:
    bits = (seq.coeffs + 1) // 2 if isinstance(seq, SignSequence) else seq.bits
    Path(path).write_bytes(pack_bits(bits))


def read_bitset(path: str | Path, as_signs: bool = True) -> SignSequence | BinarySequence:
    bits = unpack_bits(Path(path).read_bytes())
    if bits.size == 0:
        raise ValidationError(f"{path}: empty sequence")
    return SignSequence(2 * bits - 1) if as_signs else BinarySequence(bits)


def load_sequence(path: str | Path, as_signs: bool = True) -> SignSequence | BinarySequence:
    """Load a sequence from a text file (``+/-`` or ``0/1``) or a binary bitset file.

    Text files are recognised by content; anything else is read as a bitset.
    """
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError:
        text = None
    if text is not None and text.strip() and set("".join(text.split())) <= set("+-01"):
        return parse_sequence(text)
    bits = unpack_bits(raw)
    if bits.size == 0:
        raise ValidationError(f"{path}: empty sequence")
    return SignSequence(2 * bits - 1) if as_signs else BinarySequence(bits)
