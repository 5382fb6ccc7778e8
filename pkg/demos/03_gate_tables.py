#!/usr/bin/env python3
"""Truth tables for the mode-ion gates and the three-step exchange.

Four builds are compared:
  u_ve[ideal]    parity-controlled ion flip, written as a projector sum
  u_ve[literal]  the same gate assembled from two exponentials; as written
                 the exponentials compose to a pure phase on the odd
                 branch, so its flipping rows score zero
  u_ev           CNOT with the ion as control, realized by a conditional
                 displacement kick (approximate on the flipping rows)
  u_swap         ve . ev . ve, the qubit exchange between mode and ion
"""

from math import exp, pi

from catbell.encoding import EncodingParams
from catbell.gates import report_u_ev, report_u_swap, report_u_ve

alpha = 4.0
params = EncodingParams.for_amplitudes(alpha)


def show(report):
    print(f"{report.gate}  (unitarity residual {report.unitarity:.1e})")
    for row in report.rows:
        print(f"  |{row.input_label}> -> |{row.target_label}>   "
              f"fidelity {row.fidelity:.10f}")
    print(f"  worst row: {report.min_fidelity:.10f}")
    print()


show(report_u_ve("ideal", "a", params))
show(report_u_ve("literal", "a", params))
show(report_u_ev("a", params))
show(report_u_swap("a", params, "ideal", "ideal"))
show(report_u_swap("a", params, "ideal", "displacement"))

quarter = exp(-((pi / (4.0 * alpha)) ** 2))
print(f"conditional-kick flipping rows sit on exp(-(pi/4 alpha)^2) = "
      f"{quarter:.10f} at alpha = {alpha:.0f}")
