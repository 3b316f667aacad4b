"""One test per acceptance criterion; each records a PASS/FAIL summary line."""
import itertools
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, crandn
from orbit_rip._rng import rng_for
from orbit_rip.analysis import extremal_vector, omega_two, orbit_constant_exact, restricted_isometry_constant
from orbit_rip.cli import main
from orbit_rip.experiments import load_config, monotonicity_violations, run_delta_scaling, run_phase_transition
from orbit_rip.groups import (
    affine_axis_subset,
    make_affine,
    make_cyclic,
    make_direct_product,
    random_sampling_set,
    sampling_set,
)
from orbit_rip.representations import (
    affine_quasi_regular,
    fourier_realization,
    left_regular,
    representation_residuals,
    trivial,
    weyl_heisenberg,
)
from orbit_rip.sensing import (
    DISTRIBUTIONS,
    GeneratorSpec,
    build_measurement_matrix,
    draw_generator,
    partial_circulant_direct,
)

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
SEED = 20240601


def record(number, ok, detail):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    assert ok, detail


def test_criterion_01_left_regular_constant():
    start = time.perf_counter()
    groups = [make_cyclic(8), make_cyclic(12), make_direct_product(make_cyclic(2), make_cyclic(3)), make_affine(5)]
    rng = rng_for(SEED, "acceptance", 1)
    worst = 0.0
    for G in groups:
        rep = left_regular(G)
        for _ in range(5):
            m = int(rng.integers(2, G.order + 1))
            omega = random_sampling_set(G, m, seed=int(rng.integers(2**63)))
            worst = max(worst, abs(orbit_constant_exact(rep, omega).value - 1))
    elapsed = time.perf_counter() - start
    record(1, worst <= 1e-9 and elapsed < 30,
           f"max |C - 1| = {worst:.3g} (<= 1e-9) over 20 sets, {elapsed:.2f} s (< 30 s)")


def test_criterion_02_affine_constant():
    rng = rng_for(SEED, "acceptance", 2)
    excess, axis_dev = -np.inf, 0.0
    for p in (5, 7):
        rep = affine_quasi_regular(p)
        for _ in range(20):
            omega = random_sampling_set(rep.group, int(rng.integers(1, rep.group.order + 1)),
                                        seed=int(rng.integers(2**63)))
            excess = max(excess, orbit_constant_exact(rep, omega).value - len(omega_two(omega)))
        for m in range(1, p + 1):
            omega = random_sampling_set(rep.group, m, affine_axis_subset(p), seed=int(rng.integers(2**63)))
            axis_dev = max(axis_dev, abs(orbit_constant_exact(rep, omega).value - 1))
    record(2, excess <= 1e-9 and axis_dev <= 1e-9,
           f"max C - |Omega_2| = {excess:.3g} (<= 1e-9); axis max |C - 1| = {axis_dev:.3g} (<= 1e-9)")


def test_criterion_03a_trivial_constant():
    G = make_cyclic(16)
    rep = trivial(G, 8)
    values = [orbit_constant_exact(rep, sampling_set(G, range(m))).value for m in range(1, 17)]
    record("3a", values == list(range(1, 17)), f"C = m exactly for m = 1..16: {values == list(range(1, 17))}")


def test_criterion_03b_trivial_recovery_rate():
    config = load_config(CONFIGS / "phase_trivial.json")
    row = run_phase_transition(config).cell(4, 1)
    record("3b", row.success_rate <= 0.05,
           f"trivial rep n=8 m=4 s=1 success rate = {row.success_rate:.3f} (<= 0.05) over {row.trials} trials")


def test_criterion_04_fourier_failure():
    rep = fourier_realization(16)
    const_dev = max(abs(orbit_constant_exact(rep, random_sampling_set(rep.group, m, seed=m)).value - m)
                    for m in (2, 4, 8))
    table = run_delta_scaling(load_config(CONFIGS / "scaling_fourier_z16.json"))
    medians = [r.median_delta_s for r in table.rows]
    record(4, const_dev <= 1e-9 and min(medians) >= 0.9,
           f"max |C - m| = {const_dev:.3g} (<= 1e-9); median delta_2 over 25 trials for m = 2,4,8 = "
           + ", ".join(f"{v:.3f}" for v in medians) + " (>= 0.9)")


def test_criterion_05_circulant():
    rng = rng_for(SEED, "acceptance", 5)
    worst = 0.0
    for n in (8, 16, 64):
        G = make_cyclic(n)
        rep = left_regular(G)
        for _ in range(20):
            omega = random_sampling_set(G, int(rng.integers(1, n + 1)), seed=int(rng.integers(2**63)))
            xi = crandn(rng, n)
            diff = build_measurement_matrix(rep, omega, xi).entries - partial_circulant_direct(xi, omega)
            worst = max(worst, float(np.max(np.abs(diff))))
    record(5, worst <= 1e-13, f"max entrywise difference = {worst:.3g} (<= 1e-13)")


def test_criterion_06_rip_oracle():
    rng = rng_for(SEED, "acceptance", 6)
    gap, attain, monotone = np.inf, 0.0, True
    for _ in range(10):
        phi = crandn(rng, 8, 16) / np.sqrt(8)
        reports = [restricted_isometry_constant(phi, s) for s in (1, 2, 3)]
        d2 = reports[1]
        sup = 0.0
        for _ in range(10_000):
            x = np.zeros(16, complex)
            x[rng.choice(16, 2, replace=False)] = crandn(rng, 2)
            x /= np.linalg.norm(x)
            sup = max(sup, abs(np.linalg.norm(phi @ x) ** 2 - 1))
        gap = min(gap, d2.delta - sup)
        x = extremal_vector(phi, d2.argmax_support)
        attain = max(attain, abs(abs(np.linalg.norm(phi @ x) ** 2 - 1) - d2.delta))
        monotone &= reports[0].delta <= reports[1].delta <= reports[2].delta
    record(6, gap >= 0 and attain <= 1e-8 and monotone,
           f"min(delta_2 - sampled sup) = {gap:.3g} (>= 0); eigenvector gap = {attain:.3g} (<= 1e-8); "
           f"delta_1 <= delta_2 <= delta_3: {monotone}")


def _reps_up_to_24():
    groups = [make_cyclic(n) for n in range(1, 25)]
    groups += [make_direct_product(make_cyclic(a), make_cyclic(b))
               for a, b in itertools.product(range(2, 13), repeat=2) if a * b <= 24]
    groups += [make_affine(p) for p in (2, 3, 5)]
    reps = [left_regular(G) for G in groups]
    reps += [trivial(G, 3) for G in groups]
    reps += [affine_quasi_regular(p) for p in (2, 3, 5)]
    reps += [fourier_realization(n) for n in range(1, 25)]
    reps += [weyl_heisenberg(n) for n in (2, 3, 4)]
    return reps


def test_criterion_07_representation_invariants():
    worst_u = worst_h = worst_c = 0.0
    reps = _reps_up_to_24()
    for rep in reps:
        res = representation_residuals(rep)
        worst_u = max(worst_u, res["unitarity"])
        worst_h = max(worst_h, res["homomorphism"])
        if rep.kind == "projective":
            worst_c = max(worst_c, res["cocycle_modulus"])
    record(7, max(worst_u, worst_h, worst_c) <= 1e-12,
           f"{len(reps)} reps: unitarity {worst_u:.3g}, homomorphism {worst_h:.3g}, "
           f"cocycle modulus {worst_c:.3g} (all <= 1e-12)")


def test_criterion_08_scaling():
    start = time.perf_counter()
    table = run_delta_scaling(load_config(CONFIGS / "scaling_left_regular_z32.json"))
    elapsed = time.perf_counter() - start
    slope = table.slopes[2]
    violations = monotonicity_violations(table)
    record(8, -0.65 <= slope <= -0.35 and not violations and elapsed < 300,
           f"slope = {slope:.3f} in [-0.65, -0.35]; IHT rates "
           + ", ".join(f"{r.success_rate:.2f}" for r in table.rows)
           + f" monotone within 0.15: {not violations}; {elapsed:.1f} s (< 300 s)")


def test_criterion_09_subgaussian_normalization():
    n = 100_000
    details, ok = [], True
    for dist in DISTRIBUTIONS:
        xi = draw_generator(GeneratorSpec(dist, n, SEED))
        power = np.abs(xi) ** 2
        mean_sigma = np.sqrt(power.mean() / n)
        power_sigma = max(power.std() / np.sqrt(n), np.finfo(float).eps)
        z_mean = abs(xi.mean()) / mean_sigma
        z_power = abs(power.mean() - 1) / power_sigma
        ok &= z_mean <= 3 and z_power <= 3
        details.append(f"{dist} |mean|/sigma = {z_mean:.2f}, |E|xi|^2 - 1|/sigma = {z_power:.2f}")
    record(9, ok, "; ".join(details) + " (all <= 3)")


def test_criterion_10_determinism(tmp_path):
    config = str(CONFIGS / "phase_left_regular_z16.json")
    outputs = []
    for workers in ("1", "8", "1", "8"):
        out = tmp_path / f"run{len(outputs)}.csv"
        assert main(["phase", "--config", config, "--seed", "42", "--workers", workers, "--out", str(out)]) == 0
        outputs.append(out.read_bytes())
    record(10, len(set(outputs)) == 1, f"4 runs at 1 and 8 workers byte-identical: {len(set(outputs)) == 1}")
