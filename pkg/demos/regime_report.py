"""Validity report for a kappa = 1 interface design.

Prints the neglected-term estimates of the truncated light and spin
equations and the Fresnel checks of the paraxial mode basis for a
cesium-like operating point.
"""

from atomlight.regime import (Scenario, check_fresnel_basis,
                              check_light_series, check_spin_series,
                              fresnel_number)


def main():
    sc = Scenario(kappa=1.0, n_photons=1e8, n_atoms=1e6, optical_depth=30.0,
                  wavelength=852e-9, length=0.03, transverse_size=1e-3,
                  detuning=1e9, linewidth=3e7)
    print("light-equation checks:")
    print(check_light_series(sc).table())
    print("\nspin-equation checks:")
    print(check_spin_series(sc).table())
    F = fresnel_number(sc.wavelength, sc.transverse_size, sc.length)
    checks = check_fresnel_basis(F, 10)
    n_pass = sum(c.passed for c in checks)
    print(f"\nFresnel number F = {F:.3g}; paraxial modes with m+n <= 10: "
          f"{n_pass}/{len(checks)} pass")


if __name__ == "__main__":
    main()
