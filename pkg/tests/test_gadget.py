import random
from collections import Counter
from fractions import Fraction

import pytest

from resoplus.blocks import BlockLayout
from resoplus.f2 import EMPTY, FVec, enumerate_points, full_space, random_space, space_from_pairs
from resoplus.gadget import (
    PM_ONE,
    ZERO_ONE,
    EmptyPreimageError,
    EmptySupportError,
    Gadget,
    LiftedDistribution,
    constant_gadget,
    count_in_space,
    count_preimages,
    ip_gadget,
    lift_cnf,
    lift_eval,
    max_fourier,
    parity_gadget,
    preimages,
    rejection_sample_lifted,
    sample_in_space,
    sample_lifted,
    walsh_spectrum,
    walsh_spectrum_direct,
)
from resoplus.cnf import Cnf


def test_spectrum_examples():
    s = walsh_spectrum(constant_gadget(3, 0), PM_ONE)
    assert s.coeff(0) == 1
    assert all(s.coeff(m) == 0 for m in range(1, 8))

    s = walsh_spectrum(parity_gadget(2), PM_ONE)
    assert s.coeff(0b11) == 1
    assert all(s.coeff(m) == 0 for m in range(3))

    s = walsh_spectrum(ip_gadget(2), PM_ONE)
    assert all(abs(s.coeff(m)) == Fraction(1, 2) for m in range(4))


def test_parseval_holds_for_random_gadgets():
    rng = random.Random(4)
    for _ in range(60):
        b = rng.randint(1, 6)
        g = Gadget(b, tuple(rng.getrandbits(1) for _ in range(1 << b)))
        assert walsh_spectrum(g, PM_ONE).parseval_holds()


def test_fast_transform_matches_direct_summation():
    rng = random.Random(8)
    for _ in range(40):
        b = rng.randint(1, 6)
        g = Gadget(b, tuple(rng.getrandbits(1) for _ in range(1 << b)))
        for conv in (PM_ONE, ZERO_ONE):
            assert walsh_spectrum(g, conv).numerators == walsh_spectrum_direct(g, conv).numerators


def test_zero_one_empty_set_coefficient_is_average():
    g = ip_gadget(4)
    s = walsh_spectrum(g, ZERO_ONE)
    assert s.coeff(0) == Fraction(g.table.count(1), 16)


@pytest.mark.parametrize("b", [2, 4, 6, 8])
def test_ip_is_bent(b):
    s = walsh_spectrum(ip_gadget(b), PM_ONE)
    want = Fraction(1, 1 << (b // 2))
    assert all(abs(s.coeff(m)) == want for m in range(1 << b))
    assert max_fourier(ip_gadget(b)) == want


def test_max_fourier_examples():
    assert max_fourier(ip_gadget(2)) == Fraction(1, 2)
    assert max_fourier(ip_gadget(8)) == Fraction(1, 16)
    assert max_fourier(constant_gadget(3, 1)) == 1


def test_ip_gadget_table():
    g = ip_gadget(2)
    assert g.table == (0, 0, 0, 1)
    g4 = ip_gadget(4)
    assert g4.table[0b1111] == 0  # 1*1 + 1*1
    assert len(g4.preimage(1)) == 6
    with pytest.raises(ValueError):
        ip_gadget(3)


def test_gadget_file_round_trip(tmp_path):
    g = ip_gadget(4)
    path = tmp_path / "ip4.gadget"
    g.to_file(path)
    assert Gadget.from_file(path) == g


def test_lift_eval():
    lay = BlockLayout(2, 2)
    g = ip_gadget(2)
    assert lift_eval(g, lay, FVec.from_string("1101")).to_string() == "10"
    assert lift_eval(g, lay, FVec.zero(4)).bits == 0
    lay1 = BlockLayout(1, 2)
    for v in range(4):
        assert lift_eval(g, lay1, FVec(2, v)).bits == g.table[v]


def test_preimages():
    g = ip_gadget(2)
    lay1 = BlockLayout(1, 2)
    assert [p.to_string() for p in preimages(g, lay1, FVec(1, 1))] == ["11"]
    lay = BlockLayout(2, 2)
    pts = list(preimages(g, lay, FVec.from_string("10")))
    assert len(pts) == 3 == count_preimages(g, lay, FVec.from_string("10"))
    partial = list(preimages(g, lay, {1: 0}))
    assert len(partial) == 3 and all(p.width == 2 for p in partial)
    with pytest.raises(EmptyPreimageError):
        next(preimages(constant_gadget(2, 0), lay1, FVec(1, 1)))


def test_count_in_space_matches_enumeration():
    rng = random.Random(5)
    for _ in range(200):
        n, b = rng.randint(1, 3), rng.choice([1, 2, 4])
        lay = BlockLayout(n, b)
        g = Gadget(b, tuple(rng.getrandbits(1) for _ in range(1 << b)))
        sp = random_space(lay.width, rng.randint(0, 3), rng)
        if sp is EMPTY:
            continue
        z = FVec(n, rng.getrandbits(n))
        brute = sum(1 for p in enumerate_points(sp) if lift_eval(g, lay, p) == z)
        assert count_in_space(sp, lay, g, z) == brute


def test_sample_in_space_uniform():
    lay = BlockLayout(1, 2)
    g = ip_gadget(2)
    rng = random.Random(0)
    counts = Counter(sample_in_space(full_space(2), lay, g, FVec(1, 0), rng).bits for _ in range(4000))
    assert set(counts) == {0b00, 0b01, 0b10}
    # 4000 draws over 3 preimages: 1333 +- 130
    assert all(1203 <= v <= 1463 for v in counts.values())


def test_sample_lifted_matches_preimage_counting():
    # frequencies within 4 sigma over 10^4 draws, unconditioned
    lay = BlockLayout(2, 2)
    g = ip_gadget(2)
    dist = LiftedDistribution.uniform_on(lay, g, [FVec(2, 0b01), FVec(2, 0b11)])
    rng = random.Random(9)
    draws = 10_000
    counts = Counter(sample_lifted(dist, None, rng).bits for _ in range(draws))
    support = {}
    for z_bits, _ in dist.base:
        for p in preimages(g, lay, FVec(2, z_bits)):
            # z drawn uniformly between the two base points, then uniform in the fiber
            support[p.bits] = Fraction(1, 2) * Fraction(1, count_preimages(g, lay, FVec(2, z_bits)))
    assert set(counts) <= set(support)
    for bits, prob in support.items():
        mean = draws * float(prob)
        sigma = (draws * float(prob) * (1 - float(prob))) ** 0.5
        assert abs(counts.get(bits, 0) - mean) <= 4 * sigma


def test_sample_lifted_conditioned():
    lay = BlockLayout(2, 2)
    g = ip_gadget(2)
    dist = LiftedDistribution.point_mass(lay, g, FVec(2, 0b00))
    # condition on the first block's first bit being 1
    cond = space_from_pairs(4, [(1, 1)])
    rng = random.Random(3)
    for _ in range(200):
        x = sample_lifted(dist, cond, rng)
        assert x.bits & 1 == 1
        assert lift_eval(g, lay, x).bits == 0
    # contradictory conditioning: force block 0 to the unique preimage of 1
    bad = space_from_pairs(4, [(0b0001, 1), (0b0010, 1)])
    with pytest.raises(EmptySupportError):
        sample_lifted(dist, bad, rng)


def test_lift_cnf_clause_count_formula():
    # lifted clause count is the sum over base clauses of the product of the
    # falsifying-value preimage sizes
    from resoplus.tseitin import complete_graph, tseitin_cnf

    g = ip_gadget(2)
    base = tseitin_cnf(complete_graph(5)).cnf
    lifted = lift_cnf(base, g)
    expected = 0
    for clause in base.clauses:
        prod = 1
        for lit in clause:
            prod *= len(g.preimage(1 if lit < 0 else 0))
        expected += prod
    assert len(lifted.clauses) == expected == 680
    assert lifted.num_vars == 20
    assert lifted.to_dimacs().splitlines()[0] == "p cnf 20 680"


def test_exact_sampler_matches_rejection_oracle():
    # non-uniform base weights and unequal fiber sizes, nontrivial conditioning
    lay = BlockLayout(2, 2)
    g = ip_gadget(2)
    dist = LiftedDistribution(lay, g, ((0b00, 1), (0b10, 2)))
    cond = space_from_pairs(4, [(0b0011, 1)])
    rng1, rng2 = random.Random(1), random.Random(2)
    draws = 20_000
    exact = Counter(sample_lifted(dist, cond, rng1).bits for _ in range(draws))
    oracle = Counter(rejection_sample_lifted(dist, cond, rng2).bits for _ in range(draws))
    assert set(exact) == set(oracle)
    for bits in exact:
        p1, p2 = exact[bits] / draws, oracle[bits] / draws
        sigma = (p2 * (1 - p2) / draws) ** 0.5
        assert abs(p1 - p2) <= 5 * max(sigma, 1e-4)


def test_lift_cnf_counts_and_semantics():
    g = ip_gadget(2)
    base = Cnf(1, ((1,),))
    lifted = lift_cnf(base, g)
    # falsifying value 0 has three preimages
    assert len(lifted.clauses) == 3 and lifted.num_vars == 2
    assert lift_cnf(Cnf(0, ()), g).clauses == ()

    base = Cnf(2, ((1, -2), (2,)))
    lifted = lift_cnf(base, g)
    lay = BlockLayout(2, 2)
    for xb in range(16):
        zb = lift_eval(g, lay, FVec(4, xb)).bits
        assert lifted.eval_bits(xb) == base.eval_bits(zb)

    with pytest.raises(EmptyPreimageError):
        lift_cnf(Cnf(1, ((1,),)), constant_gadget(2, 1))
