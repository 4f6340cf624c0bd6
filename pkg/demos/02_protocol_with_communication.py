"""Disentangling B and C when Alice learns Bob's D outcome.

With theta = pi/4, Bob's angle theta'' alone sets how entangled the
extracted pair is; theta' does not matter.
"""
import math

import numpy as np

from entangle_sim import AngleTriple, ProtocolMode, run_protocol
from entangle_sim.analysis import entanglement_entropy_closed_form
from entangle_sim.qcore import operator_schmidt_rank
from entangle_sim.protocol import disentangler_global

mode = ProtocolMode.WITH_COMMUNICATION
print(" theta''   S_E(run)   S_E(closed)   purity     I(BC:rest)")
for tpp in np.linspace(0, math.pi / 4, 6):
    report = run_protocol(AngleTriple(math.pi / 4, 1.0, tpp), mode)
    print(f" {tpp:6.4f}   {report.final_entanglement_entropy:8.6f}   "
          f"{entanglement_entropy_closed_form(tpp):8.6f}     {report.bc_purity:.9f}  "
          f"{report.mutual_info_bc_rest:.1e}")

# The operator needs D's value on Alice's side: it does not split across AB|CD.
rank = operator_schmidt_rank(disentangler_global(mode), 2)
print("\noperator-Schmidt rank across AB|CD:", rank)
