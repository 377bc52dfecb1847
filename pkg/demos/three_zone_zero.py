"""Degeneration toward the half-line orbits when the invariant vanishes.

Along rho_k = sqrt(k), lambda_k = 1/k the invariant omega_k = rho_k lambda_k
tends to zero and the generic operators approach a three-zone patchwork of
lower-stratum operators. The full deviation on the line decreases slowly
(its error floor scales like sqrt(omega_k)), while the half-line three-zone
deviations can be followed to very large indices and show the full decay.
"""

import math

from boidol import (
    FieldGrids,
    PowerSeq,
    default_plan,
    default_test_function,
    fourier_field,
    op_norm,
    s_k_zero,
    sigma_k_zero,
)


def main():
    grids = FieldGrids.default()
    field = fourier_field(default_test_function())
    plan = default_plan("OmegaZero", PowerSeq(1, 0.5), PowerSeq(1, -1))

    print("full deviation on the line:")
    for k in (4, 8, 16, 32, 64):
        A = field.pi(plan.rho(k), plan.lam(k), grids.lin)
        dev = op_norm(A - sigma_k_zero(field, k, plan, grids))
        print(f"  k={k:<4d} omega_k={plan.w_k(k):.4f}  deviation {dev:.6f}")

    print("\nhalf-line three-zone deviations:")
    eps = plan.eps
    for k in (4, 64, 1024, 4 ** 7, 4 ** 9, 4 ** 10):
        wk = plan.w_k(k)
        dev_p = op_norm(field.tau(wk, -float(eps), grids.plus)
                        - s_k_zero(field, k, plan, 1, grids))
        dev_m = op_norm(field.tau(-wk, float(eps), grids.minus)
                        - s_k_zero(field, k, plan, -1, grids))
        exp = round(math.log(k, 4))
        print(f"  k=4^{exp:<3d} ({k:>8d})  plus {dev_p:.6f}  minus {dev_m:.6f}")


if __name__ == "__main__":
    main()
