"""Quantum memory with the collective QND map plus measurement feedback.

Sweeps the coupling kappa, applies the symplectic exchange to a vacuum
input, and reports the atomic variances before and after conditioning on
the homodyne outcome of the outgoing light quadrature.  At kappa = 1
with feedback gain -1/kappa both light quadratures end up stored in the
atoms.
"""

import numpy as np

from atomlight.dynamics import (GaussianState, QuadratureOrdering,
                                apply_collective_map, memory_protocol)


def main():
    ordering = QuadratureOrdering(n_light=1, n_atom=1)
    vac = GaussianState.vacuum(ordering)
    print(f"{'kappa':>6} {'Var(X_A out)':>13} {'expected':>10} "
          f"{'Var(P_A|meas)':>14}")
    for kappa in np.linspace(0.25, 2.0, 8):
        out = apply_collective_map(vac, kappa)
        var_xa = out.variance(ordering.X_A(0))
        res = memory_protocol(vac, kappa, gain=-1.0 / kappa, outcome=0.0)
        var_pa = res.state.variance(ordering.P_A(0))
        print(f"{kappa:6.2f} {var_xa:13.6f} {0.5 + 0.5 * kappa**2:10.6f} "
              f"{var_pa:14.6f}")

    # store a displaced input at kappa = 1
    mean = np.zeros(4)
    mean[ordering.X_P(0)], mean[ordering.P_P(0)] = 0.8, -0.3
    st = GaussianState(ordering, mean, 0.5 * np.eye(4))
    res = memory_protocol(st, 1.0, gain=-1.0, outcome=0.8)
    print("\ninput light mean (X_P, P_P) = (0.8, -0.3)")
    print(f"stored atomic mean (X_A, P_A) = "
          f"({res.state.mean[ordering.X_A(0)]:+.3f}, "
          f"{res.state.mean[ordering.P_A(0)]:+.3f})")


if __name__ == "__main__":
    main()
