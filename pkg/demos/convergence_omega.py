"""Degeneration toward a two-point limit with a nonzero central invariant.

Along rho_k = k, lambda_k = 1/k the generic operators, compressed by the
rescaling map beyond radius R_k = k^(2/3), approach the pair of
two-dimensional limit operators. The deviation table is printed together
with the rate envelope fitted on the first two indices.
"""

from boidol import (
    FieldGrids,
    PowerSeq,
    check_rate_envelope,
    default_plan,
    default_test_function,
    fourier_field,
    op_norm,
    sigma_k_omega,
)


def main():
    grids = FieldGrids.default()
    field = fourier_field(default_test_function())
    plan = default_plan("OmegaNonzero", PowerSeq(1, 1), PowerSeq(1, -1))
    ks = (4, 8, 16, 32, 64)

    print("k     rho_k   lambda_k   R_k      deviation")
    devs = []
    for k in ks:
        A = field.pi(plan.rho(k), plan.lam(k), grids.lin)
        dev = op_norm(A - sigma_k_omega(field, k, plan, grids))
        devs.append(dev)
        print(f"{k:<5d} {plan.rho(k):<7.1f} {plan.lam(k):<10.4f} "
              f"{plan.Rk(k):<8.3f} {dev:.6f}")
    print(f"\nfinal/initial deviation ratio: {devs[-1] / devs[0]:.3f}")

    rate = check_rate_envelope(field.source, plan, ks, grids)
    print(f"fitted envelope constant C = {rate['C']:.5f}, "
          f"majorizes later indices: {rate['passed']}")


if __name__ == "__main__":
    main()
