"""Side-by-side pair-generation budgets for every excitation scheme.

Prints the final rate of each scheme at the reference operating point
(100 um spot, 1 mm path, 1 bar, 240 nm pump at 1e14 W/cm^2), then the
step-by-step breakdown of the sequential lamp-plus-laser scheme.
"""

from biphoton import (
    SchemeConfig,
    biphoton_rate_narrowband,
    biphoton_rate_sequential,
    etpa_ion_rate,
    four_photon_rate_broadband,
    scrap_biphoton_rate,
    species,
)
from biphoton.units import Quantity


def main() -> None:
    he = species("He")
    reports = {
        "narrowband-4photon": biphoton_rate_narrowband(
            SchemeConfig(scheme="narrowband-4photon"), he),
        "broadband-4photon": four_photon_rate_broadband(
            SchemeConfig(scheme="broadband-4photon",
                         bandwidth=Quantity(5e12, "Hz")), he),
        "sequential": biphoton_rate_sequential(
            SchemeConfig(scheme="sequential"), he),
        "scrap": scrap_biphoton_rate(
            SchemeConfig(scheme="scrap", bandwidth=Quantity(8.8e12, "Hz"),
                         n_atoms=1e13), he),
        "etpa": etpa_ion_rate(SchemeConfig(scheme="etpa"))[1],
    }
    print(f"{'scheme':<20}  {'final rate (1/s)':>16}")
    for name, rep in reports.items():
        print(f"{name:<20}  {rep.final_rate.value:>16.4g}")

    print("\nsequential scheme, step by step:")
    for step, entry in reports["sequential"].steps.items():
        unit = f" {entry.unit}" if entry.unit else ""
        print(f"  {step:<24} {entry.value:>12.4g}{unit}   [{entry.provenance}]")


if __name__ == "__main__":
    main()
