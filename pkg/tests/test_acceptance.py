"""Acceptance criteria, one test per criterion at its stated tolerance.

Each test records a pass/fail line (printed in the terminal summary) before
asserting, so a failing criterion still shows up in the report.
"""

import itertools
import json
import math
import time

import numpy as np
import pytest

from helpers import fine_grid, oracle_sh_matrix, random_real_coeffs, unit_vectors
from spatialenergetics.beams import Beam, directivity_factor, k_magnitude_axisym, preset_profile, velocity_patterns
from spatialenergetics.cli import main
from spatialenergetics.coupling import CouplingMatrices, dipole, gaunt, product_expand, velocity_coupling_matrices
from spatialenergetics.energetics import DEFAULT_CONSTANTS, instantaneous_energetics, weighted_signals
from spatialenergetics.reference import MixtureParams, diffuseness_surface, doa_bias, predict_diffuse, predict_mixture
from spatialenergetics.scene_sim import PlaneWaveSource, SceneSpec, run_experiment, synthesize
from spatialenergetics.sh_core import (
    QuadratureGrid,
    ShVector,
    SphericalDirection,
    evaluate,
    forward_sht,
    inner_product,
    inverse_sht,
    sh_degree_order,
    sh_index,
    sh_matrix,
)

K = DEFAULT_CONSTANTS
MC_FRAMES = 100_000


def random_direction(rng):
    return SphericalDirection(math.acos(rng.uniform(-1, 1)), rng.uniform(-math.pi, math.pi))


def test_ac1_energy_preserving_velocity_patterns(acceptance_report, rng):
    worst = 0.0
    for N in range(7):
        theta, phi, _ = fine_grid(2 * (N + 1))
        for _ in range(50):
            w = ShVector(N, random_real_coeffs(N, rng))
            total = sum(np.abs(evaluate(c, theta, phi)) ** 2 for c in velocity_patterns(w))
            worst = max(worst, float(np.max(np.abs(total - evaluate(w, theta, phi).real ** 2))))
    ok = worst < 1e-10
    acceptance_report(1, "energy-preserving velocity patterns", ok, f"max err {worst:.2e} (< 1e-10)")
    assert ok


def test_ac2_gaunt_oracle(acceptance_report):
    theta, phi, w = fine_grid(12)
    Y = oracle_sh_matrix(4, theta, phi)
    G = np.einsum("pa,pb,pc,p->abc", Y, Y, Y.conj(), w)
    worst, symmetric, zeros = 0.0, True, True
    for q1, q2, q in itertools.product(range(25), repeat=3):
        g = gaunt(q1, q2, q)
        worst = max(worst, abs(g - G[q1, q2, q]))
        symmetric &= g == gaunt(q2, q1, q)
        (n1, m1), (n2, m2), (n, m) = map(sh_degree_order, (q1, q2, q))
        if m != m1 + m2 or not abs(n1 - n2) <= n <= n1 + n2 or (n + n1 + n2) % 2:
            zeros &= g == 0.0
    ok = worst < 1e-10 and symmetric and zeros
    acceptance_report(2, "Gaunt oracle", ok, f"max err {worst:.2e}, symmetry {symmetric}, zeros {zeros}")
    assert ok


def test_ac3_coupling_matrix_equivalence(acceptance_report, rng):
    worst = 0.0
    for N in range(5):
        mats = velocity_coupling_matrices(N)
        for _ in range(20):
            w = ShVector(N, random_real_coeffs(N, rng))
            for axis, A in zip("xyz", (mats.ax, mats.ay, mats.az)):
                worst = max(worst, float(np.max(np.abs(A @ w.coeffs - product_expand(w, dipole(axis)).coeffs))))
    ok = worst < 1e-10
    acceptance_report(3, "coupling matrices equal product expansion", ok, f"max err {worst:.2e}")
    assert ok


def test_ac4_plane_wave_invariance(acceptance_report, rng):
    worst_psi, worst_doa, frames_checked = 0.0, 0.0, 0
    beams = [("omni", None), ("cardioid", None)] + [("hypercardioid", n) for n in (1, 2, 3, 5)]
    for kind, order in beams:
        for trial in range(8):
            beam = Beam.preset(kind, order, random_direction(rng))
            d = random_direction(rng)
            while abs(beam.gain(d)) < 1e-3:
                d = random_direction(rng)
            fs = synthesize(SceneSpec(beam.order + 1, (PlaneWaveSource(d, 1.0),), 0.0, 25, trial))
            for a in fs:
                e = instantaneous_energetics(weighted_signals(a, beam), K)
                worst_psi = max(worst_psi, e.diffuseness)
                worst_doa = max(worst_doa, e.doa.angle_to(d))
                frames_checked += 1
    ok = worst_psi < 1e-10 and worst_doa < 1e-6
    acceptance_report(
        4, "plane-wave invariance per frame", ok,
        f"{frames_checked} frames, max psi {worst_psi:.1e}, max DOA err {worst_doa:.1e} rad",
    )
    assert ok


def test_ac5_diffuse_closed_form(acceptance_report):
    prof = preset_profile("cardioid")
    theta, phi, w = fine_grid(8)
    vals = prof.value(theta)
    q_oracle = 4 * math.pi / np.sum(w * vals**2)
    k_oracle = np.linalg.norm((w * vals**2) @ unit_vectors(theta, phi))
    q = directivity_factor(prof.as_shvector())
    k_mag = k_magnitude_axisym(prof)
    closed = (
        abs(q - 3) < 1e-10 and abs(q_oracle - 3) < 1e-10
        and abs(k_mag - 2 * math.pi / 3) < 1e-10 and abs(k_oracle - 2 * math.pi / 3) < 1e-10
    )
    steer_dir = SphericalDirection(0.9, -2.3)
    beam = Beam.from_profile(prof, steer_dir)
    psi_exact = predict_diffuse(1.0, beam, K).diffuseness
    closed &= abs(psi_exact - 0.5) < 1e-12

    start = time.perf_counter()
    est = run_experiment(SceneSpec(2, (), 1.0, MC_FRAMES, 5), beam, K)
    elapsed = time.perf_counter() - start
    anti = SphericalDirection.from_vector(-steer_dir.unit_vector())
    angle = math.degrees(SphericalDirection.from_vector(est.intensity).angle_to(anti))
    ok = closed and abs(est.diffuseness - 0.5) <= 0.02 and angle < 3.0 and elapsed < 30
    acceptance_report(
        5, "diffuse-field closed form", ok,
        f"Q {q:.12f}, K {k_mag:.12f}, MC psi {est.diffuseness:.4f}, intensity {angle:.2f} deg off anti-steer, {elapsed:.2f} s",
    )
    assert ok


def test_ac6_mixture_surface_and_bias(acceptance_report):
    prof = preset_profile("cardioid")
    beam = Beam.from_profile(prof)
    worst_psi, worst_bias, worst_closed = 0.0, 0.0, 0.0
    for i, (gamma, alpha) in enumerate(itertools.product((0.25, 1.0, 4.0), (0.0, math.pi / 4, math.pi / 2))):
        doa = SphericalDirection(alpha, 1.0)
        pred = predict_mixture(MixtureParams(gamma, 1.0, doa), beam, K)
        surface = diffuseness_surface(gamma, alpha, prof)
        worst_closed = max(worst_closed, abs(pred.diffuseness - surface))
        est = run_experiment(SceneSpec(2, (PlaneWaveSource(doa, gamma),), 1.0, MC_FRAMES, 100 + i), beam, K)
        worst_psi = max(worst_psi, abs(est.diffuseness - surface))
        bias = math.degrees(est.doa.angle_to(doa))
        worst_bias = max(worst_bias, abs(bias - math.degrees(doa_bias(gamma, alpha, prof))))
    ok = worst_psi <= 0.02 and worst_bias <= 1.0 and worst_closed <= 1e-12
    acceptance_report(
        6, "mixture surface and bias", ok,
        f"max psi err {worst_psi:.4f}, max bias err {worst_bias:.3f} deg, closed-form gap {worst_closed:.1e}",
    )
    assert ok


def test_ac7_unweighted_mixture(acceptance_report):
    beam = Beam.preset("omni")
    doa = SphericalDirection(1.2, 0.3)
    pred = predict_mixture(MixtureParams(1.0, 1.0, doa), beam, K)
    est = run_experiment(SceneSpec(1, (PlaneWaveSource(doa, 1.0),), 1.0, MC_FRAMES, 7), beam, K)
    ok = pred.diffuseness == pytest.approx(0.5, abs=1e-15) and pred.unweighted.diffuseness == 0.5
    ok = ok and abs(est.diffuseness - 0.5) <= 0.02
    acceptance_report(7, "unweighted mixture diffuseness", ok, f"closed {pred.diffuseness!r}, MC {est.diffuseness:.4f}")
    assert ok


def test_ac8_sh_foundation(acceptance_report, rng):
    worst_gram, worst_parseval, worst_round = 0.0, 0.0, 0.0
    for N in range(7):
        grid = QuadratureGrid.for_order(N)
        Y = sh_matrix(N, grid.theta, grid.phi)
        gram = Y.conj().T @ (grid.weights[:, None] * Y)
        worst_gram = max(worst_gram, float(np.max(np.abs(gram - np.eye(len(gram))))))
        f = ShVector(N, rng.standard_normal((N + 1) ** 2) + 1j * rng.standard_normal((N + 1) ** 2))
        g = ShVector(N, rng.standard_normal((N + 1) ** 2) + 1j * rng.standard_normal((N + 1) ** 2))
        fv, gv = inverse_sht(f, grid), inverse_sht(g, grid)
        worst_parseval = max(
            worst_parseval,
            abs(inner_product(f, g) - grid.integrate(fv * gv.conj())),
            abs(inner_product(f, f).real - grid.integrate(np.abs(fv) ** 2).real),
        )
        worst_round = max(worst_round, float(np.max(np.abs(forward_sht(fv, N, grid).coeffs - f.coeffs))))
    bijection = [sh_degree_order(q) for q in range(121)] == [(n, m) for n in range(11) for m in range(-n, n + 1)]
    bijection &= all(sh_index(*sh_degree_order(q)) == q for q in range(121))
    ok = max(worst_gram, worst_parseval, worst_round) < 1e-10 and bijection
    acceptance_report(
        8, "SH foundation", ok,
        f"gram {worst_gram:.1e}, Parseval {worst_parseval:.1e}, round trip {worst_round:.1e}, bijection {bijection}",
    )
    assert ok


def test_ac9_determinism(acceptance_report, tmp_path):
    scene = tmp_path / "scene.json"
    scene.write_text(json.dumps({"waves": [{"doa": {"theta": 0.8, "phi": -1.0}, "psd": 1.0}], "diffuse_psd": 1.0, "frames": 20000, "seed": 11}))
    reports = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.json"
        main(["simulate", "--beam", "preset:cardioid", "--scene", str(scene), "--out", str(out)])
        reports.append(out.read_bytes())
    same = reports[0] == reports[1] and len(reports[0]) > 0

    mfile = tmp_path / "m.json"
    main(["matrices", "--order", "5", "--out", str(mfile)])
    back = CouplingMatrices.from_json(mfile.read_text())
    ref = velocity_coupling_matrices(5)
    exact = all(np.array_equal(getattr(back, n), getattr(ref, n)) for n in ("ax", "ay", "az"))
    ok = same and exact
    acceptance_report(9, "determinism", ok, f"simulate byte-identical {same}, matrices bit-exact {exact}")
    assert ok
