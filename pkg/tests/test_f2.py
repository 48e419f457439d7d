import random
from collections import Counter

import pytest

from resoplus.f2 import (
    EMPTY,
    EnumerationCapError,
    EmptySpaceError,
    FMat,
    FVec,
    affine_from_equations,
    enumerate_points,
    full_space,
    intersect,
    is_subspace,
    intersect_space,
    points_array,
    random_space,
    rank,
    sample_point,
    space_from_pairs,
)


def test_rank_identity_and_dependent_rows():
    assert rank(FMat(3, (0b001, 0b010, 0b100))) == 3
    # third row is the xor of the first two
    assert rank(FMat(3, (0b011, 0b110, 0b101))) == 2
    assert rank(FMat(3, ())) == 0


def test_rank_invariant_under_row_rewrites():
    rng = random.Random(0)
    for _ in range(300):
        w = rng.randint(1, 12)
        rows = [rng.getrandbits(w) for _ in range(rng.randint(1, 6))]
        r = rank(FMat(w, tuple(rows)))
        shuffled = rows[:]
        rng.shuffle(shuffled)
        assert rank(FMat(w, tuple(shuffled))) == r
        if len(rows) >= 2:
            i, j = rng.sample(range(len(rows)), 2)
            rewritten = rows[:]
            rewritten[i] ^= rewritten[j]
            assert rank(FMat(w, tuple(rewritten))) == r


def test_affine_from_equations():
    assert affine_from_equations(FMat(4, (0b0011, 0b0011)), FVec(2, 0b10)) is EMPTY
    s = affine_from_equations(FMat(3, (0b001,)), FVec(1, 1))
    assert s.size() == 4 and s.codim == 1
    assert full_space(2).size() == 4
    with pytest.raises(ValueError):
        affine_from_equations(FMat(3, (0b001,)), FVec(2, 0))


def test_intersect():
    a = full_space(2)
    a1 = intersect(a, FVec(2, 0b01), 0)
    assert a1.codim == 1 and a1.size() == 2
    # redundant constraint leaves the space unchanged
    assert intersect(a1, FVec(2, 0b01), 0) == a1
    assert intersect(a1, FVec(2, 0b01), 1) is EMPTY


def test_intersect_codim_grows_by_at_most_one():
    rng = random.Random(1)
    for _ in range(200):
        w = rng.randint(1, 10)
        sp = random_space(w, rng.randint(0, w), rng)
        if sp is EMPTY:
            continue
        form = FVec(w, rng.getrandbits(w))
        bit = rng.getrandbits(1)
        out = intersect(sp, form, bit)
        if out is not EMPTY:
            assert out.codim in (sp.codim, sp.codim + 1)
            for p in enumerate_points(out):
                assert sp.contains(p)
                if not form.is_zero():
                    assert form.dot(p) == bit


def test_enumerate_points_examples():
    s = affine_from_equations(FMat(2, (0b11,)), FVec(1, 1))
    assert sorted(p.to_string() for p in enumerate_points(s)) == ["01", "10"]
    assert len(list(enumerate_points(full_space(3)))) == 8
    assert list(enumerate_points(EMPTY)) == []


def test_enumerate_cap():
    with pytest.raises(EnumerationCapError):
        list(enumerate_points(full_space(30), cap=26))


def test_enumeration_counts_match_rank_on_random_systems():
    rng = random.Random(7)
    consistent = 0
    for _ in range(1000):
        w = rng.randint(1, 12)
        eqs = FMat(w, tuple(rng.getrandbits(w) for _ in range(rng.randint(0, 6))))
        rhs = FVec(len(eqs.rows), rng.getrandbits(len(eqs.rows)) if eqs.rows else 0)
        sp = affine_from_equations(eqs, rhs)
        if sp is EMPTY:
            continue
        consistent += 1
        pts = list(enumerate_points(sp))
        assert len(pts) == 1 << (w - rank(eqs))
        assert len({p.bits for p in pts}) == len(pts)
        for p in pts:
            assert sp.contains(p)
    assert consistent > 500


def test_sample_point_uniform_and_member():
    rng = random.Random(0)
    counts = Counter(sample_point(full_space(2), rng).bits for _ in range(4000))
    assert set(counts) == {0, 1, 2, 3}
    assert all(850 <= v <= 1150 for v in counts.values())

    s = affine_from_equations(FMat(1, (1,)), FVec(1, 1))
    assert all(sample_point(s, rng).bits == 1 for _ in range(20))

    codim1 = affine_from_equations(FMat(3, (0b111,)), FVec(1, 1))
    for _ in range(200):
        p = sample_point(codim1, rng)
        assert codim1.contains(p)

    with pytest.raises(EmptySpaceError):
        sample_point(EMPTY, rng)


def test_points_array_matches_generator():
    rng = random.Random(5)
    for _ in range(100):
        w = rng.randint(1, 10)
        sp = random_space(w, rng.randint(0, 4), rng)
        if sp is EMPTY:
            continue
        arr = sorted(int(v) for v in points_array(sp))
        gen = sorted(p.bits for p in enumerate_points(sp))
        assert arr == gen


def test_space_equality_is_presentation_independent():
    a = space_from_pairs(3, [(0b011, 1), (0b110, 0)])
    b = space_from_pairs(3, [(0b110, 0), (0b101, 1)])  # row3 = row1 + row2
    assert a == b
    assert is_subspace(a, b) and is_subspace(b, a)
    c = intersect_space(a, b)
    assert c == a


def test_vector_text_round_trip():
    v = FVec.from_string("0110")
    assert v.get(1) == 1 and v.get(0) == 0
    assert v.to_string() == "0110"
    assert (v ^ v).is_zero()
    assert FVec.unit(4, 2).support() == (2,)
