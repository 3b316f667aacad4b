import itertools
import math

import numpy as np
import pytest

from conftest import crandn
from orbit_rip.analysis import (
    coherence,
    extremal_vector,
    min_measurements,
    omega_two,
    orbit_constant_exact,
    orbit_map,
    restricted_isometry_constant,
    spectral_norm,
)
from orbit_rip.errors import (
    DegenerateColumnError,
    EnumerationBudgetError,
    InvalidArgumentError,
    NumericError,
    SizeError,
)
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
    conjugate,
    fourier_realization,
    left_regular,
    trivial,
    weyl_heisenberg,
)
from orbit_rip.sensing import build_measurement_matrix


def constant_by_counting(rep, omega):
    # monomial matrices: K_j^* K_j is diagonal with the multiplicity of each
    # nonzero column position, so C = the largest multiplicity over all j
    best = 0
    for j in range(rep.dim):
        cols = [int(np.flatnonzero(np.abs(rep.matrix_of(w)[j]) > 0.5)[0]) for w in omega]
        best = max(best, max(cols.count(c) for c in set(cols)))
    return best


def rip_by_svd(phi, s):
    best = 0.0
    for S in itertools.combinations(range(phi.shape[1]), s):
        sv = np.linalg.svd(phi[:, S], compute_uv=False)
        best = max(best, sv[0] ** 2 - 1, 1 - sv[-1] ** 2)
    return best


GROUPS = [make_cyclic(8), make_cyclic(12), make_direct_product(make_cyclic(2), make_cyclic(3)), make_affine(5)]


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.label)
def test_left_regular_constant_is_one(G, rng):
    rep = left_regular(G)
    for m in range(1, G.order + 1, max(1, G.order // 6)):
        omega = random_sampling_set(G, m, seed=int(rng.integers(2**63)))
        report = orbit_constant_exact(rep, omega)
        assert abs(report.value - 1) <= 1e-9
        assert constant_by_counting(rep, omega) == 1


@pytest.mark.parametrize("m", range(1, 17))
def test_trivial_constant_is_m(m):
    G = make_cyclic(16)
    report = orbit_constant_exact(trivial(G, 8), sampling_set(G, range(m)))
    assert report.value == m


@pytest.mark.parametrize("m", [1, 2, 4, 8, 16])
def test_fourier_constant_is_m(m):
    rep = fourier_realization(16)
    report = orbit_constant_exact(rep, random_sampling_set(rep.group, m, seed=m))
    assert abs(report.value - m) <= 1e-9
    assert np.allclose(report.per_index, m, atol=1e-9)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_affine_constant_against_counting(p, rng):
    rep = affine_quasi_regular(p)
    for _ in range(15):
        omega = random_sampling_set(rep.group, int(rng.integers(1, rep.group.order + 1)),
                                    seed=int(rng.integers(2**63)))
        value = orbit_constant_exact(rep, omega).value
        assert abs(value - constant_by_counting(rep, omega)) <= 1e-9
        assert value <= len(omega_two(omega)) + 1e-9


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_affine_axis_constant_is_one(p):
    rep = affine_quasi_regular(p)
    for m in range(1, p + 1):
        omega = random_sampling_set(rep.group, m, affine_axis_subset(p), seed=m)
        assert abs(orbit_constant_exact(rep, omega).value - 1) <= 1e-9


def test_constant_witness_and_upper_bound(rng):
    for rep in (weyl_heisenberg(4), affine_quasi_regular(5),
                conjugate(left_regular(make_cyclic(6)), np.linalg.qr(crandn(rng, 6, 6))[0])):
        omega = random_sampling_set(rep.group, 5, seed=1)
        report = orbit_constant_exact(rep, omega)
        m = omega.m
        w = report.witness
        assert abs(np.linalg.norm(w) - 1) <= 1e-12
        lhs = np.linalg.norm(orbit_map(rep, omega, report.argmax_index, w))
        assert abs(lhs - math.sqrt(report.value / m)) <= 1e-8
        assert report.value == max(report.per_index)
        for _ in range(1000):
            j = int(rng.integers(rep.dim))
            y = crandn(rng, rep.dim)
            assert np.linalg.norm(orbit_map(rep, omega, j, y)) <= math.sqrt(report.value / m) * np.linalg.norm(y) * (1 + 1e-12)


@pytest.mark.parametrize("make", [lambda: weyl_heisenberg(5), lambda: affine_quasi_regular(7),
                                  lambda: fourier_realization(9)])
def test_monomial_path_matches_dense_svd(make, rng):
    rep = make()
    for m in (1, 3, 7):
        omega = random_sampling_set(rep.group, m, seed=int(rng.integers(2**63)))
        report = orbit_constant_exact(rep, omega)
        ref = [np.linalg.svd(np.array([rep.matrix_of(w)[j] for w in omega.elements]),
                             compute_uv=False)[0] ** 2 for j in range(rep.dim)]
        assert np.allclose(report.per_index, ref, atol=1e-12)


def test_conjugation_preserves_constant_on_dense_path(rng):
    # conjugating by U mixes coordinates, so only the dense SVD path applies there
    rep = conjugate(left_regular(make_cyclic(6)), np.eye(6))
    omega = random_sampling_set(rep.group, 4, seed=5)
    assert not rep.is_monomial
    assert abs(orbit_constant_exact(rep, omega).value - 1) <= 1e-12


def test_orbit_map_is_column_of_phi(rng):
    rep = affine_quasi_regular(5)
    omega = random_sampling_set(rep.group, 6, seed=3)
    y = crandn(rng, 5)
    phi = build_measurement_matrix(rep, omega, y).entries
    for j in range(5):
        assert np.allclose(orbit_map(rep, omega, j, y), phi[:, j], atol=1e-15)


def test_orbit_constant_cap():
    with pytest.raises(SizeError):
        rep = trivial(make_cyclic(2), 2049)
        orbit_constant_exact(rep, sampling_set(rep.group, [0]))


def test_omega_two():
    G = make_affine(5)
    assert omega_two(sampling_set(G, [G.index((k, 1)) for k in range(3)])) == {1}
    assert omega_two(sampling_set(G, [G.index((0, 1)), G.index((0, 2))])) == {1, 2}
    A3 = make_affine(3)
    assert omega_two(sampling_set(A3, range(A3.order))) == {1, 2}
    with pytest.raises(InvalidArgumentError):
        omega_two(sampling_set(make_cyclic(4), [0]))


def test_rip_identity_and_scaled(backend):
    for s in (1, 2, 3):
        r = restricted_isometry_constant(np.eye(6), s, backend=backend)
        assert r.delta == 0 and r.argmax_support == tuple(range(s))
        assert r.n_supports_checked == math.comb(6, s)
    assert restricted_isometry_constant(2 * np.eye(5), 1, backend=backend).delta == 3


def test_rip_unit_columns(backend, rng):
    phi = crandn(rng, 6, 10)
    phi /= np.linalg.norm(phi, axis=0)
    assert restricted_isometry_constant(phi, 1, backend=backend).delta <= 1e-12


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_rip_matches_svd_oracle(backend, rng, s):
    for _ in range(5):
        phi = crandn(rng, 7, 11) / np.sqrt(7)
        report = restricted_isometry_constant(phi, s, backend=backend)
        assert abs(report.delta - rip_by_svd(phi, s)) <= 1e-12
        x = extremal_vector(phi, report.argmax_support)
        assert abs(abs(np.linalg.norm(phi @ x) ** 2 - 1) - report.delta) <= 1e-8


def test_rip_random_lower_bound(backend, rng):
    phi = crandn(rng, 8, 16) / np.sqrt(8)
    report = restricted_isometry_constant(phi, 2, backend=backend)
    sup = 0.0
    for _ in range(10_000):
        S = rng.choice(16, 2, replace=False)
        x = np.zeros(16, complex)
        x[S] = crandn(rng, 2)
        x /= np.linalg.norm(x)
        sup = max(sup, abs(np.linalg.norm(phi @ x) ** 2 - 1))
    assert report.delta >= sup
    assert len(report.argmax_support) == 2


def test_rip_monotone_and_permutation_invariant(backend, rng):
    for _ in range(5):
        phi = crandn(rng, 6, 9) / np.sqrt(6)
        d = [restricted_isometry_constant(phi, s, backend=backend).delta for s in (1, 2, 3, 4)]
        assert d == sorted(d)
        perm = rng.permutation(9)
        for s in (1, 2, 3):
            a = restricted_isometry_constant(phi, s, backend=backend).delta
            b = restricted_isometry_constant(phi[:, perm], s, backend=backend).delta
            assert abs(a - b) <= 1e-12


def test_rip_scaling_identity_per_support(rng):
    phi = crandn(rng, 5, 7) / np.sqrt(5)
    alpha = 0.7 - 1.1j
    for S in itertools.combinations(range(7), 3):
        sub = phi[:, S]
        a = np.linalg.norm((alpha * sub).conj().T @ (alpha * sub) - np.eye(3), 2)
        b = np.linalg.norm(abs(alpha) ** 2 * sub.conj().T @ sub - np.eye(3), 2)
        assert abs(a - b) <= 1e-12


def test_rip_errors():
    with pytest.raises(EnumerationBudgetError):
        restricted_isometry_constant(np.eye(40), 10)
    with pytest.raises(InvalidArgumentError):
        restricted_isometry_constant(np.eye(4), 5)
    with pytest.raises(InvalidArgumentError):
        restricted_isometry_constant(np.eye(4), 0)


def test_coherence():
    assert coherence(np.eye(4)) == 0
    assert coherence(np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 1.0]])) == pytest.approx(1, abs=1e-15)
    with pytest.raises(DegenerateColumnError):
        coherence(np.array([[1.0, 0.0], [1.0, 0.0]]))


def test_coherence_of_trivial_rep_matrix(rng):
    G = make_cyclic(8)
    phi = build_measurement_matrix(trivial(G, 6), random_sampling_set(G, 3, seed=0), crandn(rng, 6)).entries
    unit = phi / np.linalg.norm(phi, axis=0)
    g = np.abs(unit.conj().T @ unit)
    assert np.allclose(g, 1, atol=1e-12)
    assert abs(coherence(phi) - 1) <= 1e-12


def test_min_measurements_examples():
    assert min_measurements(1, 64, 0.5, 0.01) == math.ceil(4 * np.log(100))
    assert min_measurements(1, 10, 0.25, 0.1, c=3) == math.ceil(3 * 16 * np.log(10))
    expected = math.ceil(16 * max((np.log(4) * np.log(64)) ** 2, np.log(100)))
    assert expected == 532
    assert min_measurements(4, 64, 0.5, 0.01) == 532


def test_min_measurements_monotone_in_C():
    a = min_measurements(4, 64, 0.5, 0.01, C=2)
    b = min_measurements(4, 64, 0.5, 0.01, C=4)
    assert b > 2 * a


@pytest.mark.parametrize("kwargs", [
    dict(s=0, n=5, delta=0.5, eta=0.1), dict(s=6, n=5, delta=0.5, eta=0.1),
    dict(s=1, n=5, delta=1.0, eta=0.1), dict(s=1, n=5, delta=0.5, eta=0.0),
    dict(s=1, n=5, delta=0.5, eta=0.1, C=0.5), dict(s=1, n=5, delta=0.5, eta=0.1, c=0),
])
def test_min_measurements_rejects(kwargs):
    with pytest.raises(InvalidArgumentError):
        min_measurements(**kwargs)


def test_spectral_norm_small(rng):
    assert spectral_norm(np.diag([3.0, 1.0])) == pytest.approx(3, rel=1e-15)
    Q, _ = np.linalg.qr(crandn(rng, 6, 6))
    assert abs(spectral_norm(Q) - 1) <= 1e-10
    M = crandn(rng, 5, 7)
    assert abs(spectral_norm(M) - np.linalg.svd(M, compute_uv=False)[0]) <= 1e-9


@pytest.mark.parametrize("shape", [(80, 100), (130, 70)])
def test_spectral_norm_power_iteration(rng, shape):
    M = crandn(rng, *shape)
    ref = np.linalg.svd(M, compute_uv=False)[0]
    assert abs(spectral_norm(M) - ref) <= 1e-10 * ref


def test_spectral_norm_nonconvergence(rng):
    with pytest.raises(NumericError) as info:
        spectral_norm(crandn(rng, 70, 70), max_iter=2)
    assert info.value.iterations == 2


def test_report_records(rng):
    rep = affine_quasi_regular(3)
    rec = orbit_constant_exact(rep, sampling_set(rep.group, [0, 1])).to_record()
    assert rec.splitlines()[0].startswith("orbit_constant = ")
    rip = restricted_isometry_constant(np.eye(3), 2).to_record()
    assert "delta = 0" in rip and "argmax_support = 0 1" in rip
