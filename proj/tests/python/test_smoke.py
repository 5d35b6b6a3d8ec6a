import math
import os

import numpy as np
import pytest

import pdcsim

CONFIG_DIR = os.environ.get("PDCSIM_CONFIG_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "configs"))
CONFIG = os.path.join(CONFIG_DIR, "waveguide.cfg")


@pytest.fixture(scope="module")
def study():
    cfg = pdcsim.Config.load(CONFIG)
    device = pdcsim.device_from_config(cfg)
    pump = pdcsim.pump_from_config(cfg, device)
    return cfg, device, pump


def symmetric_jsa(n=96, span=8.0):
    grid = pdcsim.FrequencyGrid.square(n, span)
    axis = np.asarray(grid.axis_s())
    s, i = np.meshgrid(axis, axis, indexing="ij")
    values = np.exp(-((s + i) ** 2) / 4.0 - ((s - i) ** 2) / 16.0).astype(complex)
    return pdcsim.JointAmplitude(grid, values).renormalized()


def test_jsa_array_and_overlap(study):
    cfg, device, pump = study
    grid = pdcsim.grid_from_config(cfg, filtered=True)
    filt = pdcsim.filter_preset("g12", cfg)
    jsa = pdcsim.build_jsa(device, pump, grid, pdcsim.approximation_from_config(cfg))
    values = jsa.values
    assert values.shape == (grid.n_s, grid.n_i)
    assert values.dtype == np.complex128
    cell = (2 * grid.span_s / (grid.n_s - 1)) ** 2
    assert np.sum(np.abs(values) ** 2) * cell == pytest.approx(1.0, rel=1e-9)
    filtered = pdcsim.apply_filter(jsa, filt)
    assert abs(pdcsim.spectral_overlap(filtered.jsa)) == pytest.approx(0.98, abs=0.01)


def test_visibility_closed_forms():
    assert pdcsim.visibility_approx(1.0, 0.0) == 1.0
    assert pdcsim.visibility_approx(0.0, 0.0) == pytest.approx(1.0 / 3.0)
    assert pdcsim.visibility_full(0.8, 0.2, 0.05, 0.05) == pytest.approx(pdcsim.visibility_approx(0.8, 0.2))
    rates = pdcsim.coincidence_rates(0.8, 0.0, 0.2, 0.06, 0.05)
    assert pdcsim.visibility_from_rates(rates) == pytest.approx(pdcsim.visibility_full(0.8, 0.2, 0.06, 0.05))


def test_schmidt_and_delay():
    jsa = symmetric_jsa()
    data = pdcsim.decompose(jsa)
    assert data.rank() >= 1
    assert data.effective_modes >= 1.0
    assert sum(l * l for l in data.coefficients) == pytest.approx(1.0, abs=1e-5)
    assert abs(pdcsim.spectral_overlap(jsa)) == pytest.approx(1.0, abs=1e-9)
    comp = pdcsim.delay_compensated_overlap(jsa, -1.0, 1.0)
    assert abs(comp.tau) < 1e-3


def test_simulation_and_estimators():
    cfg = pdcsim.SimConfig()
    cfg.schmidt_coefficients = pdcsim.flat_spectrum(20)
    cfg.gain = pdcsim.gain_for_mean_n(cfg.schmidt_coefficients, 0.3)
    cfg.detection = pdcsim.DetectionSpec(0.1, 0.1)
    cfg.gates = 200000
    cfg.seed = 3
    a = pdcsim.simulate(cfg)
    b = pdcsim.simulate(cfg)
    assert a.record == b.record
    assert a.mean_n == pytest.approx(0.3)
    ca = pdcsim.cross_correlation(a.record)
    assert abs(ca.value - (1 + 1 / 20 + 1 / 0.3)) < 4 * ca.sigma


def test_fit_round_trip():
    points = [pdcsim.VisibilityPoint(n, pdcsim.visibility_approx(0.95, n), 0.01) for n in np.linspace(0.05, 0.5, 10)]
    report = pdcsim.fit_overlap(points)
    assert report.overlap == pytest.approx(0.95, abs=1e-6)
    assert not report.at_boundary


def test_errors_carry_a_kind():
    with pytest.raises(pdcsim.PdcError) as info:
        pdcsim.fit_overlap([pdcsim.VisibilityPoint(0.1, 0.8, 0.01)] * 3)
    assert info.value.kind == "ill-posed"
    assert info.value.exit_code == 3
    with pytest.raises(pdcsim.PdcError) as info:
        pdcsim.Config.parse("[grid]\npoints\n")
    assert info.value.kind == "config"


def test_tilt_and_units(study):
    _, device, _ = study
    assert pdcsim.pm_tilt_deviation(device) == pytest.approx(0.4735, abs=1e-3)
    assert pdcsim.wavelength_nm(pdcsim.thz_to_rad_per_ps(193.3)) == pytest.approx(299792.458 / 193.3)
    assert math.isfinite(pdcsim.delta_k(device, 1.0, -1.0))
