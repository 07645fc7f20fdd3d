"""Block algebra for generalized Morse sequences.

``block_product(C, D)[s + t*k] = C[s] * D[t]`` with ``k = len(C)``: the left
factor varies fastest.  A Morse prefix is the left fold
``((B1 x B2) x B3) x ...`` of blocks that all start with +1, which makes each
prefix an initial segment of the next one.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import cycle

import numpy as np

from ._validation import ValidationError, check_int
from .polycore import FlatnessReport, flatness_report
from .sequences import SignSequence


class MorseConditionError(ValidationError):
    """A Morse factor starts with -1."""


@dataclass(frozen=True, eq=False)
class MorseBlock:
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries)
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("a block needs length k >= 1")
        if not np.all((arr == 1) | (arr == -1)):
            raise ValidationError("block entries must be -1 or +1")
        arr = arr.astype(np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_string(cls, text: str) -> "MorseBlock":
        return cls(SignSequence.from_string(text).coeffs)

    @property
    def k(self) -> int:
        return int(self.entries.size)

    def to_string(self) -> str:
        return "".join("+" if e > 0 else "-" for e in self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, MorseBlock) and np.array_equal(self.entries, other.entries)

    def __len__(self) -> int:
        return self.k


@dataclass(frozen=True)
class MorsePrefix:
    factors: tuple[MorseBlock, ...]
    sequence: np.ndarray
    boundaries: tuple[int, ...]


def block_concat(C: MorseBlock, D: MorseBlock) -> MorseBlock:
    return MorseBlock(np.concatenate([C.entries, D.entries]))


def block_product(C: MorseBlock, D: MorseBlock) -> MorseBlock:
    # row t of the outer product is D[t] * C, laid out row-major
    return MorseBlock(np.outer(D.entries, C.entries).ravel())


def parse_factors(text: str) -> list[MorseBlock]:
    """``"+-,++,+-"`` -> three blocks."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValidationError("no factors given")
    return [MorseBlock.from_string(p) for p in parts]


def morse_prefix(factors, min_length: int) -> MorsePrefix:
    """Fold ``factors`` by block product until the length reaches ``min_length``.

    The factor list is cycled if it runs out before ``min_length`` is reached.
    ``boundaries`` lists the length after each product step.
    """
    factors = [f if isinstance(f, MorseBlock) else MorseBlock(f) for f in factors]
    if not factors:
        raise ValidationError("at least one factor is required")
    min_length = check_int(min_length, "min_length", minimum=1)
    for f in factors:
        if f.entries[0] != 1:
            raise MorseConditionError(f"factor {f.to_string()} starts with -1; every Morse factor must start with +1")
    if any(f.k == 1 for f in factors):
        warnings.warn("length-1 factors do not grow the sequence", stacklevel=2)
    if all(f.k == 1 for f in factors) and min_length > 1:
        raise ValidationError("factors of length 1 can never reach the requested length")

    used = []
    acc = None
    boundaries = []
    for f in cycle(factors):
        acc = f if acc is None else block_product(acc, f)
        used.append(f)
        boundaries.append(acc.k)
        if acc.k >= min_length:
            break
    return MorsePrefix(tuple(used), acc.entries, tuple(boundaries))


def thue_morse(length: int) -> np.ndarray:
    return morse_prefix([MorseBlock(np.array([1, -1]))], length).sequence[:length]


def morse_flatness_scan(factors, lengths) -> list[dict]:
    """Flatness report of ``k^{-1/2} sum_{j<k} A[j] z^j`` for each requested prefix length.

    Rows flag lengths that are not full products of the leading factors and
    whether ``||P||_4^4`` has risen at every step so far.
    """
    lengths = [check_int(n, "length", minimum=1) for n in lengths]
    prefix = morse_prefix(factors, max(lengths))
    full = set(prefix.boundaries)
    rows = []
    previous = None
    increasing = True
    for n in lengths:
        report: FlatnessReport = flatness_report(SignSequence(prefix.sequence[:n]))
        if previous is not None and not report.l4_fourth_power > previous:
            increasing = False
        previous = report.l4_fourth_power
        rows.append({"length": n, "product_length": n in full, "increasing_so_far": increasing,
                     "report": report})
    return rows


def prefix_factor_law_holds(C: MorseBlock, D: MorseBlock) -> bool:
    """Spot check of ``(C x D)[s + t k] = C[s] D[t]`` for every index."""
    prod = block_product(C, D).entries
    k = C.k
    return all(prod[s + t * k] == C.entries[s] * D.entries[t] for s in range(k) for t in range(D.k))

