"""No communication: two controlled-phase gates give one full ebit.

Alice applies CZ (control A, target B); Bob applies a controlled -Z
(control D, target C). Whatever theta' was, B and C end up maximally
entangled and in product with everything else.
"""
import math

import numpy as np

from entangle_sim import AngleTriple, ProtocolMode, run_protocol
from entangle_sim.protocol import disentangler_global, local_halves

alice, bob = local_halves()
print("Alice (A,B):\n", alice.matrix.real)
print("Bob (C,D):\n", bob.matrix.real)
full = disentangler_global(ProtocolMode.LOCAL_ONLY).matrix
print("global operator == Alice (x) Bob:", np.array_equal(full, np.kron(alice.matrix, bob.matrix)))

for tp in np.linspace(0, math.pi, 7):
    report = run_protocol(AngleTriple(math.pi / 4, tp, math.pi / 4), ProtocolMode.LOCAL_ONLY)
    print(f"theta' = {tp:.3f}: S_E = {report.final_entanglement_entropy:.12f}, "
          f"fidelity = {report.fidelity_to_target:.12f}, passed = {report.passed}")
