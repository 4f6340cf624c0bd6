"""When does S(A:D) vanish, and does it track entanglement of BC?

Scans a coarse grid and tabulates points by whether S(A:D) vanishes and
whether the extracted pair would be entangled.
"""
import collections
import math

import numpy as np

from entangle_sim.analysis import classify, condition_scan

axis = np.linspace(0, math.pi / 2, 9)
report = condition_scan(axis, axis, axis)

table = collections.Counter()
for point in report:
    table[classify(point.mutual_info_ad), point.has_quarter_pi,
          point.entropies_constant and point.entanglement_nonzero] += 1

print("S(A:D)         some angle pi/4   constant nonzero S_E   points")
for (mi, quarter, ent), n in sorted(table.items()):
    print(f"{mi:<14} {str(quarter):<17} {str(ent):<22} {n}")

# theta = pi/4, theta'' = 0: S(A:D) vanishes but the pair is a product state.
zero = [p for p in report.flagged if p.angles.theta_double_prime == 0 and p.has_quarter_pi]
print("\nflagged points with unentangled BC:", len(zero))
