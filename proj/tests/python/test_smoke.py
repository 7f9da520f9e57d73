import math

import pytest

import dimrate

HALF_LOG_2PIE = 0.5 * math.log(2 * math.pi * math.e)


def test_spectral_model_basics():
    band = dimrate.SpectralModel.unit_band(0.25)
    assert band.total_power() == pytest.approx(1.0)
    assert dimrate.autocovariance(band, 1) == pytest.approx(2 / math.pi, abs=1e-14)
    assert dimrate.gaussian_id_rate(band) == 0.5
    assert dimrate.support_measure(dimrate.SpectralModel.flat(2.0)) == 1.0
    back = dimrate.SpectralModel.from_text(band.to_text())
    assert back.to_text() == band.to_text()


def test_szego_rate():
    value, clipped = dimrate.szego_entropy_rate(dimrate.SpectralModel.flat(1.0))
    assert value == pytest.approx(HALF_LOG_2PIE, abs=1e-8)
    assert not clipped
    _, clipped = dimrate.szego_entropy_rate(dimrate.SpectralModel.unit_band(0.25))
    assert clipped


def test_quantizer():
    assert dimrate.quantize(0.3, 4) == 0.25
    assert dimrate.quantize(-0.3, 4) == -0.5
    assert dimrate.quantize_values([0.1, -0.6, 0.99], 2) == [0, -2, 1]


def test_sampling_is_seeded():
    model = dimrate.SpectralModel.ar1(0.5)
    a = dimrate.sample_gaussian(model, 512, 3)
    assert a == dimrate.sample_gaussian(model, 512, 3)
    assert a != dimrate.sample_gaussian(model, 512, 4)
    frozen = dimrate.sample_piecewise(0.0, 100, 1)
    assert len(set(frozen)) == 1


def test_entropy_estimates():
    codes = dimrate.quantize_values(dimrate.sample_piecewise(1.0, 50000, 2), 8)
    est = dimrate.empirical_conditional_entropy(codes, 0)
    assert est.value == pytest.approx(math.log(8), abs=0.01)
    assert est.samples == 50000
    h = dimrate.markov_entropy_rate_exact([[0.9, 0.1], [0.1, 0.9]])
    assert h == pytest.approx(0.32508297339144824, abs=1e-12)
    gap = dimrate.quantized_entropy_gaussian(0.0, 1.0, 1024) - math.log(1024)
    assert gap == pytest.approx(HALF_LOG_2PIE, abs=1e-5)
    assert dimrate.quantized_entropy_uniform(16) == pytest.approx(math.log(16))


def test_rate_distortion():
    rate, kappa = dimrate.reverse_waterfill(dimrate.SpectralModel.unit_band(0.25), 0.5)
    assert kappa == pytest.approx(1.0)
    assert rate == pytest.approx(0.25 * math.log(2))
    assert dimrate.vector_rd([4.0, 1.0], 1.0) == pytest.approx(math.log(4))
    assert dimrate.rd_dimension(dimrate.SpectralModel.unit_band(0.25)) == pytest.approx(0.5, abs=1e-9)


def test_gaussian_theory():
    a1, bound = dimrate.bussgang_a1(0.0, 1.0, 8)
    assert abs(1 - a1) <= bound
    assert dimrate.quantization_error_power(0.0, 1.0, 8) <= 1 / 64
    sigma2 = dimrate.prediction_variance(dimrate.SpectralModel.ar1(0.5), 10)
    assert sigma2 == pytest.approx([1.0] * 10, abs=1e-12)


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ValueError):
        dimrate.SpectralModel.flat(-1.0)
    with pytest.raises(dimrate.NumericalError, match="embedding failed"):
        dimrate.sample_gaussian(dimrate.SpectralModel.unit_band(0.25), 10000, 1)


def test_verify_single_criterion():
    ok, line = dimrate.verify(1)
    assert ok
    assert line.startswith("c01 PASS")
