"""Limit sets of degenerating coadjoint orbits.

Classifies four example parameter families and tabulates how fast each
moving orbit approaches witnesses on its limit set.
"""

from boidol import (
    Gamma1UnionGamma0,
    OneDim,
    OrbitSequence,
    SinglePoint,
    TwoPoints,
    limit_set_gamma2,
    limit_set_gamma3,
    orbit_point,
    witness_distance,
)

FAMILIES = [
    ("rho=k, lam=1/k", lambda k: (float(k), 1.0 / k)),
    ("rho=k, lam=1/k^2", lambda k: (float(k), 1.0 / k ** 2)),
    ("rho=1+1/k, lam=2", lambda k: (1.0 + 1.0 / k, 2.0)),
]


def main():
    for name, gen in FAMILIES:
        seq = OrbitSequence("Gamma3", gen)
        limits = limit_set_gamma3(seq)
        print(f"{name}: limit set {limits}")
        if isinstance(limits, TwoPoints):
            targets = [("first", orbit_point(limits.first)),
                       ("second", orbit_point(limits.second))]
        elif isinstance(limits, SinglePoint):
            targets = [("point", orbit_point(limits.point))]
        elif isinstance(limits, Gamma1UnionGamma0):
            targets = [("X+", orbit_point(OneDim("X", 1))),
                       ("Y-", orbit_point(OneDim("Y", -1)))]
        else:
            targets = []
        for tag, target in targets:
            dists = [witness_distance(seq, target, k) for k in (10, 100, 1000)]
            print(f"  distance to {tag}: "
                  + "  ".join(f"k={k}: {d:.2e}" for k, d in zip((10, 100, 1000), dists)))
        print()

    seq2 = OrbitSequence("Gamma2", lambda k: (1.0 / k, 1))
    print(f"omega=1/k, sigma=+1 (two-dimensional stratum): "
          f"limit set {limit_set_gamma2(seq2)}")


if __name__ == "__main__":
    main()
