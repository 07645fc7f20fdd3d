"""Barker sequences: the predicate, an exhaustive census, and the length filter.

The pruned search places signs at both ends at once.  Once ``t`` signs sit at
each end, the tail autocorrelation ``c_{n-t}`` no longer depends on the middle,
so every extension is checked against ``|c_{n-t}| <= 1`` immediately.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._validation import ResourceCapError, ValidationError, check_int
from .seqstats import autocorrelation_array
from .sequences import SignSequence

DEFAULT_CAP = 28
PREFIX_DEPTH = 3


@dataclass(frozen=True)
class BarkerVerdict:
    is_barker: bool
    k: int | None = None
    c_k: int | None = None

    def __bool__(self) -> bool:
        return self.is_barker


def is_barker(seq: SignSequence) -> BarkerVerdict:
    """True iff every sidelobe ``c_k`` (k >= 1) has ``|c_k| <= 1``; otherwise the first offender."""
    c = autocorrelation_array(seq.coeffs)
    bad = np.flatnonzero(np.abs(c[1:]) > 1)
    if bad.size == 0:
        return BarkerVerdict(True)
    k = int(bad[0]) + 1
    return BarkerVerdict(False, k, int(c[k]))


def turyn_storer_admissible(n: int) -> bool:
    """Length filter for Barker sequences: n <= 2, odd n <= 13, or n = 4 m^2."""
    n = check_int(n, "n", minimum=1)
    if n <= 2:
        return True
    if n % 2:
        return n <= 13
    if n % 4:
        return False
    m = math.isqrt(n // 4)
    return 4 * m * m == n


def canonical(seq: SignSequence) -> SignSequence:
    """Lexicographically least of ``seq`` and ``-seq`` in ``+/-`` text order ('+' < '-')."""
    s, t = seq.to_string(), seq.negated().to_string()
    return seq if s <= t else seq.negated()


@dataclass
class BarkerSearchResult:
    n: int
    found: list[SignSequence]
    count: int
    nodes_explored: int
    wall_time: float
    prune: bool = True
    reversal_pairs: list[tuple[str, str]] = field(default_factory=list)

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "n": self.n,
            "prune": self.prune,
            "count": self.count,
            "found": [s.to_string() for s in self.found],
            "nodes_explored": self.nodes_explored,
            "reversal_pairs": [list(p) for p in self.reversal_pairs],
            "symmetry": "negation quotient (eps_0 = +1); reversal reported, not quotiented",
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out


# -- pruned depth-first search ---------------------------------------------------


def _tail_ok(b: list[int], n: int, t: int) -> bool:
    # c_{n-1-t} over the t+1 front and t+1 back entries
    k = n - 1 - t
    c = 0
    for j in range(t + 1):
        c += b[j] * b[j + k]
    return -1 <= c <= 1


def _full_ok(b: list[int], n: int) -> bool:
    for k in range(1, n):
        c = 0
        for j in range(n - k):
            c += b[j] * b[j + k]
        if c > 1 or c < -1:
            return False
    return True


def _children(b: list[int], n: int, t: int):
    """Extend a state with ``t`` signs at each end; yields (b, t + 1) for survivors."""
    fronts = (1,) if t == 0 else (1, -1)
    if 2 * t + 1 == n:
        for f in fronts:
            nb = b.copy()
            nb[t] = f
            yield nb
        return
    for f in fronts:
        for g in (1, -1):
            nb = b.copy()
            nb[t] = f
            nb[n - 1 - t] = g
            yield nb


def _dfs(b: list[int], n: int, t: int, found: list[list[int]]) -> int:
    if 2 * t >= n:
        if _full_ok(b, n):
            found.append(b)
        return 0
    nodes = 0
    for nb in _children(b, n, t):
        nodes += 1
        if 2 * t + 1 == n or _tail_ok(nb, n, t):
            nodes += _dfs(nb, n, t + 1, found)
    return nodes


def _frontier(n: int, depth: int) -> tuple[list[tuple[list[int], int]], int]:
    """Surviving states after ``depth`` levels, in deterministic DFS order."""
    states = [([0] * n, 0)]
    nodes = 0
    for _ in range(depth):
        nxt = []
        for b, t in states:
            if 2 * t >= n:
                nxt.append((b, t))
                continue
            for nb in _children(b, n, t):
                nodes += 1
                if 2 * t + 1 == n or _tail_ok(nb, n, t):
                    nxt.append((nb, t + 1))
        states = nxt
    return states, nodes


def _subtree(args) -> tuple[list[list[int]], int]:
    b, n, t = args
    found: list[list[int]] = []
    nodes = _dfs(b, n, t, found)
    return found, nodes


# -- unpruned enumeration --------------------------------------------------------


def sign_block(n: int, start: int, stop: int) -> np.ndarray:
    """Rows for integers in ``[start, stop)``: eps_0 = +1, eps_j = +/-1 from bit j-1."""
    idx = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, dtype=np.int64)
    bits = (idx[:, None] >> shifts[None, :]) & 1
    S = np.empty((idx.size, n), dtype=np.int8)
    S[:, 0] = 1
    S[:, 1:] = 1 - 2 * bits
    return S


def block_autocorrelations(S: np.ndarray) -> np.ndarray:
    """Sidelobes ``c_1..c_{n-1}`` for every row of a sign matrix."""
    n = S.shape[1]
    out = np.empty((S.shape[0], max(n - 1, 0)), dtype=np.int64)
    for k in range(1, n):
        out[:, k - 1] = np.einsum("ij,ij->i", S[:, : n - k], S[:, k:], dtype=np.int64)
    return out


def _brute_force(n: int, chunk: int = 1 << 15) -> tuple[list[list[int]], int]:
    total = 1 << (n - 1)
    found = []
    for start in range(0, total, chunk):
        S = sign_block(n, start, min(total, start + chunk))
        ok = np.all(np.abs(block_autocorrelations(S)) <= 1, axis=1)
        found.extend(S[ok].astype(int).tolist())
    return found, total


# -- driver ------------------------------------------------------------------------


def _load_checkpoint(path: Path, n: int) -> dict:
    if not path.exists():
        return {"n": n, "completed": -1, "found": [], "subtree_nodes": 0}
    state = json.loads(path.read_text())
    if state.get("n") != n:
        raise ValidationError(f"checkpoint {path} belongs to n = {state.get('n')}, not {n}")
    return state


def search_barker(
    n: int,
    prune: bool = True,
    jobs: int = 1,
    cap: int = DEFAULT_CAP,
    checkpoint: str | Path | None = None,
) -> BarkerSearchResult:
    """Enumerate every Barker sequence of length n with eps_0 = +1.

    The search is exhaustive modulo global negation.  With ``checkpoint`` the
    pruned search records each finished prefix subtree (the resume token is
    the index of the last completed one) and skips them on a rerun.
    """
    n = check_int(n, "n", minimum=1)
    if n > cap:
        raise ResourceCapError(f"n = {n} exceeds the search cap {cap}; raise the cap explicitly to proceed")
    jobs = check_int(jobs, "jobs", minimum=1)
    t0 = time.perf_counter()

    if not prune:
        raw, nodes = _brute_force(n)
    else:
        states, frontier_nodes = _frontier(n, min(PREFIX_DEPTH, (n + 1) // 2))
        ckpt = Path(checkpoint) if checkpoint else None
        state = _load_checkpoint(ckpt, n) if ckpt else {"n": n, "completed": -1, "found": [], "subtree_nodes": 0}
        todo = list(enumerate(states))[state["completed"] + 1 :]
        tasks = [(b, n, t) for _, (b, t) in todo]
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                _merge(pool.map(_subtree, tasks), todo, state, ckpt)
        else:
            _merge(map(_subtree, tasks), todo, state, ckpt)
        raw = state["found"]
        nodes = frontier_nodes + state["subtree_nodes"]

    found = sorted({canonical(SignSequence(b)) for b in raw}, key=lambda s: s.to_string())
    for s in found:
        if not is_barker(s):
            raise AssertionError(f"search produced a non-Barker sequence {s.to_string()}")
    names = {s.to_string() for s in found}
    pairs = []
    for s in found:
        r = canonical(s.reversed()).to_string()
        if r in names and s.to_string() <= r:
            pairs.append((s.to_string(), r))
    return BarkerSearchResult(n, found, len(found), nodes, time.perf_counter() - t0, prune, pairs)


def _merge(results, todo, state: dict, ckpt: Path | None) -> None:
    # results arrive in prefix order, so the checkpoint is always a clean cut
    for (index, _), (sub_found, sub_nodes) in zip(todo, results):
        state["found"].extend(sub_found)
        state["subtree_nodes"] += sub_nodes
        state["completed"] = index
        if ckpt is not None:
            ckpt.write_text(json.dumps(state))
