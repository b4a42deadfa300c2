import numpy as np
import pytest

from sswpt import fixtures as fx
from sswpt.signal import GimtSpec, make_shape, synth
from sswpt.squeeze import assign_bins, default_vgrid, gate, if_info, retained_energy, squeeze
from sswpt.wavepacket import WavePacketPlane, build_mother, forward, make_ladder


@pytest.fixture(scope="module")
def tone_plane():
    return forward(fx.harmonic(64, 8192).signal, build_mother(1.0), make_ladder(8192))


def test_tone_if_is_exact(tone_plane):
    v = if_info(tone_plane)
    R = gate(tone_plane)
    assert R.any()
    assert np.max(np.abs(v[R].real - 64)) / 64 <= 1e-6


def test_zero_coefficient_gives_sentinel(tone_plane):
    W = tone_plane.coeffs.copy()
    W[:, ::7] = 0
    plane = WavePacketPlane(W, tone_plane.ladder, tone_plane.mother, tone_plane.dcoeffs)
    v = if_info(plane)
    assert np.all(np.isinf(v[:, ::7]))
    assert np.all(np.isfinite(v[:, 1::7]))


def test_if_info_needs_derivative():
    plane = forward(fx.harmonic(64, 1024).signal, build_mother(1.0), make_ladder(1024), derivative=False)
    with pytest.raises(ValueError):
        if_info(plane)


def test_tone_energy_in_one_bin(tone_plane):
    sq = squeeze(tone_plane)
    rows = np.flatnonzero(sq.energy.sum(axis=1))
    assert rows.tolist() == [64]


def test_huge_threshold_empties_plane(tone_plane):
    sq = squeeze(tone_plane, epsilon=1e12)
    assert not sq.energy.any()
    assert not sq.retained.any()
    assert np.all(sq.bins == -1)


def test_coarse_grid_warns(tone_plane):
    with pytest.warns(UserWarning):
        squeeze(tone_plane, vgrid=default_vgrid(8192, 4.0))


def test_vgrid_must_be_linear(tone_plane):
    with pytest.raises(ValueError):
        squeeze(tone_plane, vgrid=np.array([0.0, 1.0, 3.0]))


def test_assign_bins_edges():
    grid = np.arange(0.0, 11.0)
    v = np.array([-1.0, 0.4, 0.6, 9.6, 10.4, 10.6, np.inf], dtype=complex)
    assert assign_bins(v, grid).tolist() == [-1, 0, 1, 10, 10, -1, -1]


@pytest.fixture(scope="module")
def ex1_plane(ex1):
    return forward(ex1.signal, build_mother(1.0), make_ladder(ex1.L))


def test_conservation(ex1_plane):
    sq = squeeze(ex1_plane)
    kept = retained_energy(ex1_plane, sq)
    assert abs(sq.energy.sum() - kept) <= 1e-12 * kept
    assert np.all(sq.energy >= 0)


def test_bins_record_retained_cells(ex1_plane):
    sq = squeeze(ex1_plane)
    assert np.array_equal(sq.bins >= 0, sq.retained)


def test_retained_energy_monotone_in_threshold(ex1_plane):
    kept = [retained_energy(ex1_plane, squeeze(ex1_plane, epsilon=e)) for e in (1e-8, 1e-6, 1e-4, 1e-2)]
    assert all(a >= b for a, b in zip(kept, kept[1:]))


def test_example1_if_accuracy(ex1, ex1_plane):
    # cells whose packet frequency sits within a band radius of a harmonic's IF
    v = if_info(ex1_plane)
    R = gate(ex1_plane)
    lad = ex1_plane.ladder
    t = np.arange(ex1.L) / ex1.L
    worst = 0.0
    for spec in ex1.specs:
        for n, c in spec.shape.coeffs.items():
            if abs(c) < 0.2:
                continue
            truth = spec.inst_frequency(t, n)
            near = np.abs(lad.centers[:, None] - truth[None, :]) < 0.25 * lad.radii[:, None]
            cells = R & near & (np.abs(ex1_plane.coeffs) > 0.5 * np.abs(ex1_plane.coeffs).max(axis=0))
            dev = np.abs(v.real - truth[None, :]) / truth[None, :]
            if cells.any():
                worst = max(worst, dev[cells].max())
    assert worst <= 0.02


def test_concentration_single_harmonic():
    L = 8192
    spec = GimtSpec(make_shape({1: 1.0}), lambda t: 1.0, 80.0, lambda t: t + 0.01 * np.sin(2 * np.pi * t))
    plane = forward(synth(spec, L), build_mother(1.0), make_ladder(L))
    sq = squeeze(plane)
    truth = spec.inst_frequency(np.arange(L) / L)
    near = np.abs(sq.vgrid[:, None] - truth[None, :]) <= 2
    assert sq.energy[near].sum() >= 0.99 * sq.energy.sum()


def test_example2_has_21_components(ex2_planes):
    from sswpt.ridges import count_ridges
    (_, sq), _ = ex2_planes
    assert count_ridges(sq).count == 21
