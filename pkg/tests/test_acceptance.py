"""Exit criteria for the build, one test per criterion at its stated tolerance.

Each test adds a PASS/FAIL line to the "acceptance criteria" section printed
at the end of the pytest run.
"""

import itertools
import math
import time

import numpy as np

from entangle_sim import analysis, cli
from entangle_sim.protocol import (
    AngleTriple,
    ProtocolMode,
    conditional_probability,
    conditional_state,
    disentangler_global,
    local_halves,
    run_protocol,
)
from entangle_sim.qcore import operator_schmidt_rank

Q = math.pi / 4
BITS = list(itertools.product((0, 1), repeat=2))


def schmidt_entropy(psi):
    sv = np.linalg.svd(psi.amplitudes.reshape(2, 2), compute_uv=False)
    lam = sv**2 / np.sum(sv**2)
    return float(-sum(x * math.log2(x) for x in lam if x > 1e-300))


def test_c1_product_form(acceptance):
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    reports = [run_protocol(AngleTriple(Q, tp, tpp), ProtocolMode.WITH_COMMUNICATION)
               for tp, tpp in rng.uniform(0, 2 * math.pi, size=(200, 2))]
    reports += [run_protocol(AngleTriple(Q, tp, Q), ProtocolMode.LOCAL_ONLY)
                for tp in rng.uniform(0, 2 * math.pi, size=200)]
    elapsed = time.perf_counter() - start
    purity_gap = max(1 - r.bc_purity for r in reports)
    fidelity_gap = max(1 - r.fidelity_to_target for r in reports)
    mi = max(r.mutual_info_bc_rest for r in reports)
    ok = purity_gap < 1e-9 and fidelity_gap < 1e-9 and mi < 1e-9 and elapsed < 5
    acceptance("C1 product form (400 runs)", ok,
               f"max 1-purity {purity_gap:.1e}, max 1-fidelity {fidelity_gap:.1e}, "
               f"max I(BC:QRAD) {mi:.1e} bits, {elapsed:.2f}s")
    assert ok


def test_c2_entropy_closed_form(acceptance):
    start = time.perf_counter()
    worst = 0.0
    for tp, tpp in itertools.product(np.linspace(0, math.pi, 50), np.linspace(0, math.pi / 2, 50)):
        closed = analysis.entanglement_entropy_closed_form(tpp)
        for i, l in BITS:
            _, phi = conditional_state(AngleTriple(Q, tp, tpp), i, l)
            worst = max(worst, abs(schmidt_entropy(phi) - closed))
    elapsed = time.perf_counter() - start
    end0 = abs(analysis.entanglement_entropy_closed_form(0.0))
    end1 = abs(analysis.entanglement_entropy_closed_form(Q) - 1)
    ok = worst < 1e-10 and end0 < 1e-12 and end1 < 1e-12 and elapsed < 2
    acceptance("C2 entropy closed form (50x50)", ok,
               f"max diff {worst:.1e}, |S(0)| {end0:.1e}, |S(pi/4)-1| {end1:.1e}, {elapsed:.2f}s")
    assert ok


def test_c3_local_maximality(acceptance):
    rng = np.random.default_rng(3)
    start = time.perf_counter()
    worst = max(abs(run_protocol(AngleTriple(Q, tp, Q), ProtocolMode.LOCAL_ONLY)
                    .final_entanglement_entropy - 1)
                for tp in rng.uniform(0, 2 * math.pi, size=100))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-10 and elapsed < 2
    acceptance("C3 local-only maximality (100 runs)", ok,
               f"max |S_E - 1| {worst:.1e}, {elapsed:.2f}s")
    assert ok


def test_c4_factorization(acceptance):
    start = time.perf_counter()
    alice, bob = local_halves()
    local = disentangler_global(ProtocolMode.LOCAL_ONLY).matrix
    split_error = float(np.max(np.abs(local - np.kron(alice.matrix, bob.matrix))))
    rank = operator_schmidt_rank(disentangler_global(ProtocolMode.WITH_COMMUNICATION), 2)
    elapsed = time.perf_counter() - start
    ok = split_error == 0.0 and rank >= 2 and elapsed < 1
    acceptance("C4 factorization dichotomy", ok,
               f"local split error {split_error}, communicating rank {rank}, {elapsed:.3f}s")
    assert ok


def test_c5_condition_scan(acceptance):
    start = time.perf_counter()
    axis = np.linspace(0, math.pi / 2, 11)
    report = analysis.condition_scan(axis, axis, axis)
    eighth = analysis.condition_point(AngleTriple(*[math.pi / 8] * 3))
    elapsed = time.perf_counter() - start
    quarter = [p for p in report if p.has_quarter_pi]
    worst = max(p.mutual_info_ad for p in quarter)
    ok = (len(report) == 1331 and quarter and worst < 1e-9
          and eighth.mutual_info_ad > 1e-6 and elapsed < 30)
    acceptance("C5 condition scan (11^3)", ok,
               f"{len(quarter)} pi/4-class points, max S(A:D) {worst:.1e}; "
               f"S(A:D) at pi/8 {eighth.mutual_info_ad:.4f}; {elapsed:.2f}s")
    assert ok


def test_c6_fig3_curve(acceptance):
    start = time.perf_counter()
    _, rows, _ = cli.sweep_rows("fig3", None, analysis.DEFAULT_AVG_POINTS)
    elapsed = time.perf_counter() - start
    t = np.array([v for _, v in rows])
    ok = rows[0][0] == 0.0 and abs(t[0] - 0.5) < 1e-9 and np.all(t < 1) and elapsed < 20
    acceptance("C6a fig3: T(0) = 1/2, T < 1", ok,
               f"T(0) {t[0]:.12f}, max T {t.max():.6f}, {len(t)} points, {elapsed:.2f}s")
    assert ok


_FIG2 = {}


def _fig2():
    if not _FIG2:
        start = time.perf_counter()
        _, rows, _ = cli.sweep_rows("fig2", None, analysis.DEFAULT_AVG_POINTS)
        _FIG2["grid"] = np.array([g for g, _ in rows])
        _FIG2["t"] = np.array([v for _, v in rows])
        _FIG2["elapsed"] = time.perf_counter() - start
    return _FIG2


def test_c6_fig2_bound_and_monotone(acceptance):
    fig = _fig2()
    grid, t = fig["grid"], fig["t"]
    head = t[grid <= Q + 1e-12]
    monotone = bool(np.all(np.diff(head) >= 0))
    ok = bool(np.all(t < 1)) and monotone and fig["elapsed"] < 20
    acceptance("C6b fig2: T_avg < 1, non-decreasing on [0, pi/4]", ok,
               f"max T_avg {t.max():.6f}, {len(head)} points monotone={monotone}, "
               f"{fig['elapsed']:.2f}s")
    assert ok


def test_c6_fig2_zero_at_origin(acceptance):
    # Expected to fail: at theta'' = 0 the conditional states are product
    # states but B is still coherent over j, so T(theta') = |sin 2theta'| / 2
    # and the average is ~1/pi rather than 0. The criterion is kept as stated.
    t0 = _fig2()["t"][0]
    ok = abs(t0) < 1e-9
    acceptance("C6c fig2: T_avg(0) = 0", ok, f"T_avg(0) = {t0:.12f} (closed form gives ~1/pi)")
    assert ok


def test_c7_probability_completeness(acceptance):
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    worst = 0.0
    for t, tp, tpp in rng.uniform(-2 * math.pi, 2 * math.pi, size=(1000, 3)):
        angles = AngleTriple(t, tp, tpp)
        worst = max(worst, abs(sum(conditional_probability(angles, i, l) for i, l in BITS) - 2))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-12 and elapsed < 1
    acceptance("C7 probability completeness (1000 triples)", ok,
               f"max |sum p - 2| {worst:.1e}, {elapsed:.3f}s")
    assert ok


def test_c8_determinism(acceptance, tmp_path):
    paths = [tmp_path / "fig2_a.csv", tmp_path / "fig2_b.csv"]
    start = time.perf_counter()
    codes = [cli.main(["sweep", "--figure", "fig2", "--out", str(p)]) for p in paths]
    elapsed = time.perf_counter() - start
    same = paths[0].read_bytes() == paths[1].read_bytes()
    ok = codes == [0, 0] and same and elapsed < 20
    acceptance("C8 determinism (two fig2 sweeps)", ok,
               f"byte-identical={same}, {paths[0].stat().st_size} bytes, {elapsed:.2f}s")
    assert ok
