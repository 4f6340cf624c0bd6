"""The encoded state and what Alice and Bob actually hold.

Run with ``python demos/01_encoded_state.py``.
"""
import itertools
import math

import numpy as np

from entangle_sim import AngleTriple, conditional_state, prepare_joint_state, reduced_abcd
from entangle_sim.analysis import entanglement_entropy_state, mutual_information_ad
from entangle_sim.protocol import LAYOUT

angles = AngleTriple(math.pi / 4, 0.6, math.pi / 6)
system = prepare_joint_state(angles)

# Nonzero amplitudes of the six-qubit state, labelled by register position.
print("register:", "".join(LAYOUT.labels))
for index in np.flatnonzero(np.abs(system.state.amplitudes) > 1e-12):
    bits = format(index, "06b")
    print(f"  |{bits}>  {system.state.amplitudes[index].real:+.4f}")

# Tracing out Q and R leaves a block-diagonal ABCD state, one block per (i, l).
rho = reduced_abcd(system)
print("\nS(A:D) =", f"{mutual_information_ad(rho):.2e}", "bits")

# Each block is a pure BC state; at theta = pi/4 the weights are all 1/2
# and every block has the same entanglement.
for i, l in itertools.product((0, 1), repeat=2):
    p, phi = conditional_state(angles, i, l)
    print(f"  (i={i}, l={l})  p = {p:.4f}  S_E = {entanglement_entropy_state(phi):.6f}")
