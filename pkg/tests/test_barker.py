import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from flatlab._validation import ResourceCapError
from flatlab.barker import (
    block_autocorrelations,
    canonical,
    is_barker,
    search_barker,
    sign_block,
    turyn_storer_admissible,
)
from flatlab.sequences import SignSequence

from conftest import BARKER_13, brute_autocorr

BARKER_LENGTHS = {1, 2, 3, 4, 5, 7, 11, 13}


def test_is_barker_examples(barker13, barker11):
    assert is_barker(SignSequence.from_string("++-"))
    v = is_barker(SignSequence.from_string("+-+"))
    assert not v and (v.k, v.c_k) == (1, -2)
    assert is_barker(barker13) and is_barker(barker11)


@given(st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=30))
def test_is_barker_matches_definition(values):
    c = brute_autocorr(values)
    assert bool(is_barker(SignSequence(np.array(values)))) == all(abs(x) <= 1 for x in c[1:])


@pytest.mark.parametrize("n,ok", [(1, True), (2, True), (13, True), (15, False), (16, True), (36, True), (50, False), (8, False)])
def test_turyn_storer(n, ok):
    assert turyn_storer_admissible(n) is ok


def test_canonical_fixes_first_sign(barker13):
    assert canonical(barker13.negated()) == barker13
    assert canonical(barker13).to_string()[0] == "+"


def test_search_small_cases():
    r3 = search_barker(3)
    assert "++-" in {s.to_string() for s in r3.found}
    assert search_barker(6).count == 0
    for n in range(15, 26, 2):
        assert search_barker(n).count == 0


def test_search_finds_the_length_13_sequence():
    r = search_barker(13)
    assert r.count >= 1
    found = {s.to_string() for s in r.found}
    assert canonical(SignSequence.from_string(BARKER_13)).to_string() in found or \
        canonical(SignSequence.from_string(BARKER_13).reversed()).to_string() in found


def test_census_up_to_25():
    for n in range(1, 26):
        r = search_barker(n)
        assert (r.count > 0) == (n in BARKER_LENGTHS), n
        for s in r.found:
            assert s.q == n and is_barker(s)
            assert all(abs(c) <= 1 for c in brute_autocorr(s.coeffs)[1:])


def test_prune_matches_brute_force():
    for n in range(1, 17):
        pruned = search_barker(n)
        brute = search_barker(n, prune=False)
        assert pruned.count == brute.count
        assert pruned.found == brute.found


def test_parallel_matches_serial():
    serial = search_barker(13)
    parallel = search_barker(13, jobs=2)
    assert serial.found == parallel.found and serial.nodes_explored == parallel.nodes_explored


def test_reversal_pairs_reported():
    r = search_barker(4)
    assert r.reversal_pairs
    d = r.to_dict(include_timing=False)
    assert "wall_time" not in d and d["count"] == r.count


def test_cap_refusal():
    with pytest.raises(ResourceCapError):
        search_barker(29)
    assert search_barker(29, cap=29).count == 0


def test_checkpoint_resume(tmp_path):
    path = tmp_path / "ck.json"
    first = search_barker(13, checkpoint=path)
    state = json.loads(path.read_text())
    assert state["n"] == 13 and state["completed"] >= 0
    again = search_barker(13, checkpoint=path)
    assert again.found == first.found and again.nodes_explored == first.nodes_explored


def test_sign_block_rows():
    S = sign_block(4, 0, 8)
    assert S.shape == (8, 4) and np.all(S[:, 0] == 1)
    assert len({tuple(r) for r in S}) == 8
    c = block_autocorrelations(S)
    for row, side in zip(S, c):
        assert side.tolist() == brute_autocorr(row)[1:]
