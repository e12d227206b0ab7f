import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blisnet.errors import LengthMismatch, NegativeUnderSqrt
from blisnet.operators import (
    DiffusionOperator,
    WeightVector,
    diffusion_operator,
    eig_sym,
    normalized_laplacian,
    weighted_norm,
)
from blisnet.wavelets import (
    ScaleSequence,
    apply_frame,
    build_frame,
    compute_frame_bounds,
    dyadic_scales,
    frame_energy,
    save_filters_csv,
    universal_lower_bound,
    wavelet_polys,
)
from blisnet.zoo import path_graph, star_graph


def test_dyadic_scales_examples():
    assert dyadic_scales(0).scales == (0, 1)
    assert dyadic_scales(2).scales == (0, 1, 2, 4)
    assert dyadic_scales(4).scales == (0, 1, 2, 4, 8, 16)
    assert dyadic_scales(4).J == 4


def test_scale_sequence_validation():
    with pytest.raises(ValueError):
        ScaleSequence((1, 2))
    with pytest.raises(ValueError):
        ScaleSequence((0, 1, 1))
    with pytest.raises(ValueError):
        ScaleSequence((0, 2))
    assert ScaleSequence((0, 1, 3, 9)).is_dyadic is False
    assert dyadic_scales(3).is_dyadic is True


def test_wavelet_polys_minimal():
    p = wavelet_polys(ScaleSequence((0, 1)))
    t = np.linspace(0, 1, 11)
    assert np.allclose(p[0](t), 1 - t)
    assert np.allclose(p[1](t), t)


def test_wavelet_polys_three_scales():
    p = wavelet_polys(ScaleSequence((0, 1, 2)))
    assert [q(0.5) for q in p] == [0.5, 0.25, 0.25]


@settings(max_examples=40, deadline=None)
@given(t=st.floats(0, 1), J=st.integers(0, 5))
def test_polys_partition_of_unity(t, J):
    total = sum(p(t) for p in wavelet_polys(dyadic_scales(J)))
    assert abs(total - 1.0) < 1e-12


def test_polys_partition_of_unity_grid():
    polys = wavelet_polys(ScaleSequence((0, 1, 3, 7, 12)))
    t = np.linspace(0, 1, 200)
    total = sum(p(t) for p in polys)
    assert np.abs(total - 1.0).max() < 1e-12
    for p in polys:
        assert p(t).min() > -1e-15


def test_build_frame_k2_hand_values(zoo):
    op = diffusion_operator(zoo["K2"], alpha=-0.5)
    frame = build_frame(op, dyadic_scales(0), "w2")
    assert np.allclose(frame.filters[0], [[0.5, -0.5], [-0.5, 0.5]])
    assert np.allclose(frame.filters[1], [[0.5, 0.5], [0.5, 0.5]])


def test_w1_applied_twice_is_w2(zoo):
    for name in ("K2", "C3", "C6", "S5"):
        op = diffusion_operator(zoo[name], alpha=-0.5)
        scales = dyadic_scales(2)
        w1 = build_frame(op, scales, "w1")
        w2 = build_frame(op, scales, "w2", method="spectral")
        for j in range(w1.size):
            twice = w1.filters[j] @ w1.filters[j]
            assert np.abs(twice - w2.filters[j]).max() < 1e-7


def test_frame_filter_count():
    op = diffusion_operator(star_graph(5), alpha=-0.5)
    frame = build_frame(op, dyadic_scales(4), "w2")
    assert frame.size == 6
    assert frame.filters.shape == (6, 6, 6)


def test_route_equivalence(zoo):
    for name, g in zoo.items():
        op = diffusion_operator(g, alpha=-0.5)
        scales = dyadic_scales(2)
        power = build_frame(op, scales, "w2", method="power")
        spectral = build_frame(op, scales, "w2", method="spectral")
        assert np.abs(power.filters - spectral.filters).max() < 1e-6


def test_route_equivalence_nondyadic(zoo):
    op = diffusion_operator(zoo["C6"], alpha=-0.5)
    scales = ScaleSequence((0, 1, 3, 5))
    power = build_frame(op, scales, "w2", method="power")
    spectral = build_frame(op, scales, "w2", method="spectral")
    assert np.abs(power.filters - spectral.filters).max() < 1e-7


def test_frame_bounds_w1(zoo):
    for g in zoo.values():
        op = diffusion_operator(g, alpha=-0.5)
        assert compute_frame_bounds(op, dyadic_scales(3), "w1") == (1.0, 1.0)


def test_frame_bounds_w2_star_single_scale():
    # S3 has K-eigenvalues {1, 1/2, 1/2, 0}; (1-t)^2 + t^2 attains 1/2 at 1/2
    op = diffusion_operator(star_graph(3), alpha=-0.5)
    c, C = compute_frame_bounds(op, ScaleSequence((0, 1)), "w2")
    assert c == pytest.approx(0.5, abs=1e-12)
    assert C == pytest.approx(1.0, abs=1e-12)


def test_frame_bounds_w2_k2():
    # K has eigenvalues {1, 0}; (1-t)^2 + t^2 equals 1 at both endpoints
    op = diffusion_operator(path_graph(2), alpha=-0.5)
    c, C = compute_frame_bounds(op, ScaleSequence((0, 1)), "w2")
    assert (c, C) == (1.0, 1.0)


def test_frame_bounds_above_universal(zoo):
    for J in (0, 2, 4):
        scales = dyadic_scales(J)
        floor = universal_lower_bound(scales)
        assert floor > 0
        for g in zoo.values():
            op = diffusion_operator(g, alpha=-0.5)
            c, C = compute_frame_bounds(op, scales, "w2")
            assert c >= floor - 1e-9
            assert C <= 1 + 1e-12


def test_apply_frame_zero_signal(zoo):
    op = diffusion_operator(zoo["C6"], alpha=-0.5)
    frame = build_frame(op, dyadic_scales(2), "w2")
    outs = apply_frame(frame, np.zeros(6))
    assert all(np.allclose(o, 0) for o in outs)


def test_apply_frame_length_mismatch(zoo):
    op = diffusion_operator(zoo["C6"], alpha=-0.5)
    frame = build_frame(op, dyadic_scales(2), "w2")
    with pytest.raises(LengthMismatch):
        apply_frame(frame, np.zeros(7))


def test_w1_isometry_random_signals(zoo, rng):
    op = diffusion_operator(zoo["C6"], alpha=-0.5)
    frame = build_frame(op, dyadic_scales(2), "w1")
    for _ in range(100):
        x = rng.normal(size=6)
        ratio = frame_energy(frame, x) / weighted_norm(x, frame.weight) ** 2
        assert abs(ratio - 1.0) < 1e-9


def test_w2_constant_vector_on_regular_graph(zoo):
    # on a regular graph the constant vector is the eigenvalue-1 direction of
    # P, so every band-pass output vanishes and the low-pass reproduces it
    op = diffusion_operator(zoo["C6"], alpha=-0.5)
    frame = build_frame(op, dyadic_scales(2), "w2")
    ones = np.ones(6)
    outs = apply_frame(frame, ones)
    for j in range(frame.size - 1):
        assert np.abs(outs[j]).max() < 1e-12
    assert np.allclose(outs[-1], ones)


def test_w2_degree_vector_on_irregular_graph(zoo):
    # in general the fixed vector of P is the degree vector, not the constant
    g = zoo["P20"]
    op = diffusion_operator(g, alpha=-0.5)
    frame = build_frame(op, dyadic_scales(2), "w2")
    outs = apply_frame(frame, g.degrees)
    for j in range(frame.size - 1):
        assert np.abs(outs[j]).max() < 1e-10
    assert np.allclose(outs[-1], g.degrees)


def test_w2_frame_sandwich(zoo, rng):
    for name, g in zoo.items():
        op = diffusion_operator(g, alpha=-0.5)
        scales = dyadic_scales(2)
        frame = build_frame(op, scales, "w2")
        c, C = frame.frame_lower, frame.frame_upper
        for _ in range(30):
            x = rng.normal(size=g.n)
            ratio = frame_energy(frame, x) / weighted_norm(x, frame.weight) ** 2
            assert c - 1e-9 <= ratio <= C + 1e-9


def test_bound_tightness_eigenvector_probes(zoo):
    from blisnet.wavelets import _band_energy

    for g in zoo.values():
        op = diffusion_operator(g, alpha=-0.5)
        scales = dyadic_scales(2)
        frame = build_frame(op, scales, "w2")
        energy_at = _band_energy(scales, op.g_values)
        for idx, target in (
            (int(np.argmin(energy_at)), frame.frame_lower),
            (int(np.argmax(energy_at)), frame.frame_upper),
        ):
            probe = op.k_eigenvectors[:, idx]
            ratio = frame_energy(frame, probe) / weighted_norm(probe, frame.weight) ** 2
            assert abs(ratio - target) < 1e-7


def test_matrix_free_matches_dense(zoo, rng):
    g = zoo["P20"]
    op = diffusion_operator(g, alpha=-0.5)
    scales = dyadic_scales(3)
    dense = build_frame(op, scales, "w2")
    free = build_frame(op, scales, "w2", matrix_free=True)
    assert free.filters is None
    X = rng.normal(size=(g.n, 7))
    assert np.abs(dense.apply_matrix(X) - free.apply_matrix(X)).max() < 1e-10


def test_matrix_free_rejected_for_w1(zoo):
    op = diffusion_operator(zoo["C6"], alpha=-0.5)
    with pytest.raises(ValueError):
        build_frame(op, dyadic_scales(1), "w1", matrix_free=True)


def test_negative_under_sqrt():
    op = diffusion_operator(star_graph(3), alpha=-0.5)
    bad = DiffusionOperator(
        spectral=op.spectral,
        g_values=np.array([1.0, 0.5, 0.5, -0.01]),
        weight=op.weight,
        matrix=op.matrix,
        graph=op.graph,
    )
    with pytest.raises(NegativeUnderSqrt):
        build_frame(bad, dyadic_scales(1), "w1")


def test_save_filters_csv(tmp_path, zoo):
    op = diffusion_operator(zoo["K2"], alpha=-0.5)
    frame = build_frame(op, dyadic_scales(0), "w2")
    save_filters_csv(frame, tmp_path)
    loaded = np.loadtxt(tmp_path / "filter_0.csv", delimiter=",")
    assert np.allclose(loaded, frame.filters[0])
