import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spacelca import gf2
from spacelca.entropy import Entropy, FiniteEntropy
from spacelca.errors import ParameterError
from spacelca.kwise import SampleSpace, new_sample_space
from spacelca.ordering import Cmp, Ordering, copies_for, new_ordering


def test_copies_and_rank_range():
    assert copies_for(4) == 8 and copies_for(2) == 4 and copies_for(16) == 16
    o = new_ordering(2, 2, Entropy("01"))
    assert o.s == 4 and all(0 <= o.rank(i) < 16 for i in range(2))
    o4 = new_ordering(4, 2, Entropy("02"))
    assert all(0 <= r < 256 for r in o4.ranks().tolist())


def test_zero_seed_ranks_are_zero():
    m, k = 8, 3
    bits = copies_for(m) * k * gf2.field_log_for(m)
    o = new_ordering(m, k, FiniteEntropy(0, bits))
    assert o.ranks().tolist() == [0] * m


def test_rank_concatenates_copies_msb_first():
    o = new_ordering(50, 4, Entropy("0d"))
    for i in range(50):
        expected = int("".join(str(c.bit(i)) for c in o.copies), 2)
        assert o.rank(i) == expected == int(o.ranks()[i])


def test_replay():
    a = new_ordering(100, 5, Entropy("0e", "order"))
    b = new_ordering(100, 5, Entropy("0e", "order"))
    assert a.ranks().tolist() == b.ranks().tolist()


def _gf2_space(c0_bits, c1_bits):
    return [SampleSpace.from_coefficients(2, [a, b]) for a, b in zip(c0_bits, c1_bits)]


def test_compare_less_by_rank():
    # m=2 works over GF(2): bit(0)=c0, bit(1)=c0^c1; rank(0)=0101=5, rank(1)=1001=9
    o = Ordering(2, 2, _gf2_space([0, 1, 0, 1], [1, 1, 0, 0]))
    assert (o.rank(0), o.rank(1)) == (5, 9)
    assert o.compare(0, 1) is Cmp.LESS and o.compare(1, 0) is Cmp.GREATER
    assert o.collisions == 0


def test_compare_tie_breaks_by_index_and_counts():
    zero = [SampleSpace.from_coefficients(8, [0, 0]) for _ in range(copies_for(8))]
    o = Ordering(8, 2, zero)
    assert o.compare(2, 7) is Cmp.LESS
    assert o.compare(7, 2) is Cmp.GREATER
    assert o.collisions == 2
    assert o.has_collision()


def test_compare_self_rejected():
    o = new_ordering(4, 2, Entropy("01"))
    with pytest.raises(ParameterError):
        o.compare(1, 1)


@pytest.mark.parametrize("m,k", [(1, 1), (4, 1), (4, 5)])
def test_bad_parameters(m, k):
    with pytest.raises(ParameterError):
        new_ordering(m, k, Entropy("01"))


def test_pair_collision_exhaustive_full_orderings_m2():
    # m=2: 4 copies, 2 seed bits each -> all 256 orderings enumerable
    hits = 0
    for seed in range(256):
        o = new_ordering(2, 2, FiniteEntropy(seed, 8))
        hits += o.rank(0) == o.rank(1)
    assert Fraction(hits, 256) == Fraction(1, 2**4)


def _copy_distribution(m, k, elements):
    """Exact joint law of one copy's bits at ``elements`` over its entire seed space."""
    ell = gf2.field_log_for(m)
    total = 1 << (k * ell)
    counts = Counter()
    for seed in range(total):
        s = new_sample_space(m, k, FiniteEntropy(seed, k * ell))
        counts[tuple(s.bit(e) for e in elements)] += 1
    return {pattern: Fraction(c, total) for pattern, c in counts.items()}


@pytest.mark.parametrize("i,j", [(0, 1), (0, 3), (1, 2)])
def test_pair_collision_is_exactly_m_to_minus_4(i, j):
    m, k = 4, 2
    per_copy = _copy_distribution(m, k, (i, j))
    same = sum(p for (a, b), p in per_copy.items() if a == b)
    # copies read disjoint seed slices, so the law of the rank pair is the product
    assert same ** copies_for(m) == Fraction(1, m**4)


def _order_law(per_copy, n_elems, s):
    """Law of the tie-broken order from s independent copies (ordered-partition DP).

    Returns (order law, probability of any tie, law restricted to tie-free outcomes).
    """
    states = {(tuple(range(n_elems)),): Fraction(1)}
    for _ in range(s):
        nxt = Counter()
        for blocks, p in states.items():
            for pattern, q in per_copy.items():
                refined = []
                for block in blocks:
                    zeros = tuple(e for e in block if pattern[e] == 0)
                    ones = tuple(e for e in block if pattern[e] == 1)
                    refined += [b for b in (zeros, ones) if b]
                nxt[tuple(refined)] += p * q
        states = nxt
    law = Counter()
    strict = Counter()
    for blocks, p in states.items():
        if len(blocks) == n_elems:
            strict[tuple(b[0] for b in blocks)] += p
        law[tuple(e for block in blocks for e in sorted(block))] += p
    return law, sum(p for blocks, p in states.items() if len(blocks) < n_elems), strict


def _iid_order_law(R):
    """Tie-broken order law of three iid uniform ranks on range(R), by direct counting."""
    a, b = np.meshgrid(np.arange(R), np.arange(R), indexing="ij")
    keys = [a.ravel() * 3, b.ravel() * 3 + 1]
    counts = Counter()
    for c in range(R):
        k2 = np.full(keys[0].shape, c * 3 + 2)
        order = np.argsort(np.stack([keys[0], keys[1], k2]), axis=0)
        codes = order[0] * 9 + order[1] * 3 + order[2]
        for code, n in zip(*np.unique(codes, return_counts=True)):
            counts[(code // 9, (code // 3) % 3, code % 3)] += int(n)
    return {p: Fraction(n, R**3) for p, n in counts.items()}


def test_three_element_order_law_with_3wise_copies():
    m, k = 4, 3
    per_copy = _copy_distribution(m, k, (0, 1, 3))
    assert set(per_copy.values()) == {Fraction(1, 8)} and len(per_copy) == 8
    law, tie, strict = _order_law(per_copy, 3, copies_for(m))
    assert sum(law.values()) == 1
    assert law == _iid_order_law(2 ** copies_for(m))
    # with no tie inside the subset all 3! orders are exactly equally likely
    assert len(strict) == 6 and len(set(strict.values())) == 1
    # any strict order beats the all-tied correction by at most the tie mass
    for perm in itertools.permutations(range(3)):
        assert abs(law[perm] - Fraction(1, 6)) <= tie


@given(st.integers(2, 300), st.integers(2, 8), st.binary(min_size=2, max_size=6))
def test_compare_is_a_total_order(m, k, seed):
    k = min(k, m)
    o = new_ordering(m, k, Entropy(seed))
    order = sorted(range(m), key=o.key)
    rng = np.random.default_rng(len(seed))
    for _ in range(30):
        i, j = rng.choice(m, 2, replace=False)
        cmp = o.compare(int(i), int(j))
        assert cmp is (Cmp.LESS if order.index(i) < order.index(j) else Cmp.GREATER)
        assert o.compare(int(j), int(i)) is Cmp(-cmp)


def test_materialize_does_not_change_ranks():
    a = new_ordering(500, 6, Entropy("aa"))
    before = [a.rank(i) for i in range(500)]
    a.materialize()
    assert a.ranks().tolist() == before


def test_wide_ranks_fall_back_to_python_ints():
    m = 1 << 17  # 68 copies
    o = new_ordering(m, 2, Entropy("01"))
    pts = [0, 5, m - 1]
    assert o.ranks(pts).tolist() == [o.rank(i) for i in pts]
