"""The magnet-flux diversion mechanism, made visible.

The machine parks most of the magnet flux in a local loop at low
current.  As coil current rises, the shared iron saturates, the local
loop's effective reluctance grows, and magnet flux is diverted into the
air gap where it produces torque.  This script sweeps current at the
aligned position and prints the magnet and coil contributions to the
gap-branch flux, the iron state, and the iteration counts of the
saturating solver.  Run as `python3 demos/saturation_diversion.py`.
"""

from srmec.motor import MaterialSet, MotorGeometry, OperatingPoint
from srmec.saturation import BhCurve, solve_nonlinear


def main() -> None:
    geometry = MotorGeometry()
    materials = MaterialSet()
    curve = BhCurve.default()

    print("gap-branch flux split at the aligned position")
    print(f"{'I (A)':>5}  {'total (Wb)':>12}  {'coil part':>12}  {'magnet part':>12}  "
          f"{'magnet share':>12}  {'worst B (T)':>11}  {'iters':>5}")
    previous_share = None
    for current in range(1, 9):
        point = OperatingPoint(phase_current=float(current),
                               rotor_angle=geometry.aligned_angle_deg)
        solution = solve_nonlinear(geometry, materials, curve, point)
        total = solution.branches.phi_g
        coil = solution.coil_branches.phi_g
        pm = solution.pm_branches.phi_g
        share = pm / total
        worst_b = max(abs(b) for b in solution.flux_densities.values())
        marker = ""
        if previous_share is not None and share > 2.0 * previous_share:
            marker = "  <- diversion surge"
        print(f"{current:>5}  {total:>12.3e}  {coil:>12.3e}  {pm:>12.3e}  "
              f"{share:>12.3f}  {worst_b:>11.2f}  {solution.iterations:>5}{marker}")
        previous_share = share

    print()
    print("The magnet share dips first (the coil must cancel the magnet bias in")
    print("the shared poles) and then surges once the iron saturates: that surge")
    print("is the diversion mechanism, and it is why the magnet torque share at")
    print("8 A is several times the low-current share.")


if __name__ == "__main__":
    main()
