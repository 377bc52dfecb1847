import math

import pytest

from boidol.errors import NotProperlyConverging, TargetNotInLimitSet
from boidol.group import Character, DualVector, Gen, OneDim, TwoDim, orbit_point
from boidol.orbits import (
    AtInfinity,
    Gamma1PairUnionGamma0,
    Gamma1UnionGamma0,
    Gamma1WithGamma0,
    OrbitSequence,
    SinglePoint,
    TwoPoints,
    closure_gamma1,
    limit_set_gamma2,
    limit_set_gamma3,
    witness_distance,
)


def g3(gen, k_max=10_000):
    return OrbitSequence("Gamma3", gen, k_max)


SEQ_OMEGA1 = g3(lambda k: (float(k), 1.0 / k))
SEQ_OMEGA0 = g3(lambda k: (float(k), 1.0 / k ** 2))
SEQ_HAUSDORFF = g3(lambda k: (1.0 + 1.0 / k, 2.0))


def test_two_point_limit():
    ls = limit_set_gamma3(SEQ_OMEGA1)
    assert isinstance(ls, TwoPoints)
    assert abs(ls.first.omega - 1.0) < 1e-6 and ls.first.sigma == -1
    assert abs(ls.second.omega + 1.0) < 1e-6 and ls.second.sigma == 1


def test_gamma1_union_gamma0_limit():
    assert isinstance(limit_set_gamma3(SEQ_OMEGA0), Gamma1UnionGamma0)


def test_hausdorff_single_point():
    ls = limit_set_gamma3(SEQ_HAUSDORFF)
    assert isinstance(ls, SinglePoint)
    assert isinstance(ls.point, Gen)
    assert abs(ls.point.rho - 1.0) < 1e-6
    assert abs(ls.point.lam - 2.0) < 1e-6


def test_at_infinity():
    seq = g3(lambda k: (float(k), 2.0))
    assert isinstance(limit_set_gamma3(seq), AtInfinity)


def test_not_properly_converging():
    seq = g3(lambda k: (0.0, 2.0 + math.sin(k)))
    with pytest.raises(NotProperlyConverging):
        limit_set_gamma3(seq)


def test_subsequence_invariance():
    for base in (SEQ_OMEGA1, SEQ_OMEGA0, SEQ_HAUSDORFF):
        sub = OrbitSequence("Gamma3", lambda k, g=base.generator: g(2 * k), base.k_max // 2)
        assert type(limit_set_gamma3(sub)) is type(limit_set_gamma3(base))


def test_gamma2_limit_sets():
    seq = OrbitSequence("Gamma2", lambda k: (1.0 / k, -1))
    ls = limit_set_gamma2(seq)
    assert ls == Gamma1PairUnionGamma0(OneDim("X", 1), OneDim("Y", -1))
    seq = OrbitSequence("Gamma2", lambda k: (-(2.0 ** -min(k, 60)), 1))
    ls = limit_set_gamma2(seq)
    assert ls == Gamma1PairUnionGamma0(OneDim("X", -1), OneDim("Y", 1))
    with pytest.raises(NotProperlyConverging):
        limit_set_gamma2(OrbitSequence("Gamma2", lambda k: (1.0, 1)))


def test_closure_gamma1():
    assert closure_gamma1("X", 1) == Gamma1WithGamma0(OneDim("X", 1))
    c = closure_gamma1("Y", -1)
    assert closure_gamma1(c.orbit.axis, c.orbit.sigma) == c


def test_witness_distance_two_point_targets():
    target = orbit_point(TwoDim(1.0, -1))
    ds = [witness_distance(SEQ_OMEGA1, target, k) for k in (10, 100, 1000)]
    assert ds[0] > ds[1] > ds[2]
    assert ds[2] < 1.1e-3
    target2 = orbit_point(TwoDim(-1.0, 1))
    d2 = witness_distance(SEQ_OMEGA1, target2, 1000)
    assert d2 < 1.1e-3


def test_witness_distance_character_target():
    target = DualVector(3.0, 0.0, 0.0, 0.0)
    ds = [witness_distance(SEQ_OMEGA0, target, k) for k in (10, 100, 1000)]
    assert ds[0] > ds[1] > ds[2]


def test_witness_distance_gamma1_target():
    target = orbit_point(OneDim("X", 1), (0.3, 0.2))
    ds = [witness_distance(SEQ_OMEGA0, target, k) for k in (10, 100, 1000)]
    assert ds[0] > ds[1] > ds[2]
    assert ds[2] < 1.1e-3


def test_witness_distance_own_orbit_point():
    k = 37
    rho, lam = SEQ_OMEGA1.generator(k)
    target = orbit_point(Gen(rho, lam), (0.4, -0.9))
    assert witness_distance(SEQ_OMEGA1, target, k) < 1e-8


def test_witness_distance_exclusion():
    target = orbit_point(OneDim("X", 1))
    with pytest.raises(TargetNotInLimitSet):
        witness_distance(SEQ_OMEGA1, target, 10)


def test_witness_distance_off_limit_gen():
    target = orbit_point(Gen(5.0, 7.0))
    with pytest.raises(TargetNotInLimitSet):
        witness_distance(SEQ_HAUSDORFF, target, 10)
