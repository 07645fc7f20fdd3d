"""Extremal L4 / merit-factor search over sign sequences of one length."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from ._validation import ValidationError, check_int
from .barker import block_autocorrelations, canonical, sign_block
from .seqstats import sidelobe_energy
from .sequences import SignSequence

EXHAUSTIVE_CAP = 24
CHUNK = 1 << 16
OBJECTIVES = ("min-L4", "max-merit")


def _chunk_minimum(args) -> tuple[int, list[int]]:
    n, start, stop = args
    S = sign_block(n, start, stop)
    c = block_autocorrelations(S)
    energy = np.einsum("ij,ij->i", c, c)
    best = int(energy.min())
    return best, (start + np.flatnonzero(energy == best)).tolist()


def _decode(n: int, index: int) -> SignSequence:
    return SignSequence(sign_block(n, index, index + 1)[0])


def _exhaustive(n: int, jobs: int) -> tuple[int, list[int]]:
    total = 1 << (n - 1)
    tasks = [(n, s, min(total, s + CHUNK)) for s in range(0, total, CHUNK)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_chunk_minimum, tasks))
    else:
        parts = [_chunk_minimum(t) for t in tasks]
    best = min(p[0] for p in parts)
    winners = [i for e, idx in parts if e == best for i in idx]
    return best, winners


def _energy(s: np.ndarray) -> int:
    c = np.correlate(s, s, mode="full")[s.size :]
    return int(np.dot(c, c))


def _stochastic(n: int, budget: int, seed: int) -> tuple[int, list[np.ndarray]]:
    """Random restarts with single-flip descent; ``budget`` counts energy evaluations."""
    rng = np.random.default_rng(seed)
    best, winners, spent = None, [], 0
    while spent < budget:
        s = rng.choice(np.array([-1, 1], dtype=np.int64), size=n)
        e = _energy(s)
        spent += 1
        improved = True
        while improved and spent < budget:
            improved = False
            for j in rng.permutation(n):
                s[j] = -s[j]
                e2 = _energy(s)
                spent += 1
                if e2 < e:
                    e, improved = e2, True
                    break
                s[j] = -s[j]
                if spent >= budget:
                    break
        if best is None or e < best:
            best, winners = e, [s.copy()]
        elif e == best and not any(np.array_equal(s, w) or np.array_equal(-s, w) for w in winners):
            winners.append(s.copy())
    return best, winners


def flat_scan(
    n: int,
    objective: str = "min-L4",
    budget: int = 200_000,
    seed: int = 0,
    cap: int = EXHAUSTIVE_CAP,
    jobs: int = 1,
    max_winners: int = 64,
) -> dict:
    """Smallest ``||P||_4^4`` (equivalently largest merit factor) at length n.

    Exhaustive over all ``2^(n-1)`` sequences with eps_0 = +1 when ``n <= cap``,
    otherwise a seeded stochastic search labelled as such.  Values are exact,
    from integer autocorrelations.
    """
    n = check_int(n, "n", minimum=1)
    if objective not in OBJECTIVES:
        raise ValidationError(f"objective must be one of {OBJECTIVES}")
    jobs = check_int(jobs, "jobs", minimum=1)
    if n <= cap:
        mode = "exhaustive"
        energy, idx = _exhaustive(n, jobs)
        ties = len(idx)
        winners = [canonical(_decode(n, i)) for i in idx[:max_winners]]
    else:
        mode = "stochastic"
        energy, arrays = _stochastic(n, check_int(budget, "budget", minimum=1), seed)
        winners = [canonical(SignSequence(a)) for a in arrays[:max_winners]]
        ties = None
    for w in winners:
        if sidelobe_energy(w) != energy:
            raise AssertionError("winner energy does not match the scan minimum")
    l4 = 1 + Fraction(2 * energy, n * n)
    return {
        "n": n,
        "objective": objective,
        "mode": mode,
        "seed": seed if mode == "stochastic" else None,
        "sidelobe_energy": energy,
        "l4_fourth_power": float(l4),
        "l4_fourth_power_exact": f"{l4.numerator}/{l4.denominator}",
        "merit_factor": math.inf if energy == 0 else float(Fraction(n * n, 2 * energy)),
        "lower_bound": float(1 + Fraction(2, n * n)) if n >= 2 else 1.0,
        "tie_count": ties,
        "winners": sorted(w.to_string() for w in winners),
    }
