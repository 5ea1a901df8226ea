import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mslab.disk import geometric_depths
from mslab.errors import DomainError, ResolutionError, SingularityError
from mslab.inner import InnerFunction, adc_probe, blaschke_lambda, growth_verdict, kernel_norm_sq
from mslab.symbols import random_blaschke


def test_eval_examples():
    assert InnerFunction.blaschke([0])(0.5) == pytest.approx(0.5)
    assert InnerFunction.atom(1, 1)(0) == pytest.approx(math.exp(-1), abs=1e-15)
    assert InnerFunction.blaschke([0, 0.5])(0) == 0


def test_blaschke_factor_convention():
    a = 0.3 + 0.4j
    z = 0.1 - 0.2j
    I = InnerFunction.blaschke([a])
    expected = (np.conj(a) / abs(a)) * (a - z) / (1 - np.conj(a) * z)
    assert I(z) == pytest.approx(expected, abs=1e-15)
    assert I(0).real > 0 and abs(I(0).imag) < 1e-15


def test_singular_at_atom():
    with pytest.raises(SingularityError):
        InnerFunction.atom(1, 1)(1.0)


def test_outside_disk_rejected():
    with pytest.raises(DomainError):
        InnerFunction.monomial(2)(1.5)
    with pytest.raises(DomainError):
        InnerFunction.blaschke([1.0])
    with pytest.raises(DomainError):
        InnerFunction.atom(0.5, 1)


@settings(max_examples=40)
@given(st.integers(0, 2 ** 31))
def test_unimodular_on_circle(seed):
    rng = np.random.default_rng(seed)
    I = random_blaschke(rng, int(rng.integers(1, 9)), 0.97)
    zeta = np.exp(2j * np.pi * rng.uniform(size=50))
    assert np.max(np.abs(np.abs(I(zeta)) - 1)) < 1e-12


def test_product_concatenates():
    J = InnerFunction.blaschke([0.5]) * InnerFunction.atom(-1, 0.5)
    z = 0.2 + 0.1j
    assert J(z) == pytest.approx(InnerFunction.blaschke([0.5])(z) * InnerFunction.atom(-1, 0.5)(z))
    assert not J.is_finite_blaschke


def test_config_roundtrip():
    I = InnerFunction((0.0, 0.3 + 0.1j), ((1j, 0.7),), np.exp(0.4j))
    assert InnerFunction.from_config(I.to_config()) == I


@pytest.mark.parametrize("I, lam, expected", [
    (InnerFunction.monomial(1), 0.3, 1.0),
    (InnerFunction.monomial(2), 0.5, 1.25),
    (InnerFunction.atom(1, 1), 0.9, (1 - math.exp(-38)) / 0.19),
])
def test_kernel_norm_sq(I, lam, expected):
    assert kernel_norm_sq(I, lam) == pytest.approx(expected, rel=1e-13)


def test_kernel_norm_near_circle_is_accurate():
    # closed form for z^n: (1 - r^{2n}) / (1 - r^2) -> n
    r = 1 - 1e-12
    assert kernel_norm_sq(InnerFunction.monomial(3), r) == pytest.approx(3.0, rel=1e-9)


def test_adc_probe_examples():
    v = adc_probe(InnerFunction.monomial(2), 1.0)
    assert v.bounded and v.sup_norm_sq <= 2
    v = adc_probe(InnerFunction.atom(1, 1), 1.0)
    assert not v.bounded
    assert v.growth_exponent_estimate == pytest.approx(1.0, abs=0.1)
    assert adc_probe(InnerFunction.atom(-1, 1), 1.0).bounded


def test_growth_verdict_on_power_laws():
    d = geometric_depths(0.5, 40)
    bounded, _, e = growth_verdict(d, 1 / (1 - d) ** 0.5)
    assert not bounded and e == pytest.approx(0.5, abs=1e-9)
    bounded, _, e = growth_verdict(d, 2 - (1 - d))
    assert bounded and abs(e) < 1e-3


def test_blaschke_lambda():
    assert np.allclose(blaschke_lambda(0.25, 1).zeros, [0.75])
    assert np.allclose(blaschke_lambda(0.5, 2).zeros, [0.5, 0.75])
    B = blaschke_lambda(0.5, 5)
    assert B(0) == pytest.approx(np.prod([1 - 0.5 ** n for n in range(1, 6)]), rel=1e-14)
    with pytest.raises(ResolutionError):
        blaschke_lambda(0.5, 60)
