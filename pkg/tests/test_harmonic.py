import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from exotela import ElasticityTensor, ValidationError
from exotela.harmonic import (
    HarmonicTriplet,
    convert_scheme,
    decompose,
    harmonic_part,
    normalize_scheme,
    reconstruct,
    split_sym_anti,
    total_symmetrization,
)
from exotela.normal_forms import isotropic_bulk_shear, isotropic_lame
from exotela.tensor import ID2, components_to_kelvin, ddot, random_rotation, rotate, trace12

from helpers import random_tensor, relative

SCHEMES = ("CGHD", "SWHD")


def is_harmonic(h, atol):
    return (np.allclose(h, h.transpose(0, 2, 1, 3), atol=atol)
            and np.allclose(h, h.transpose(0, 3, 2, 1), atol=atol)
            and np.allclose(trace12(h), 0.0, atol=atol))


@pytest.mark.parametrize("scheme", SCHEMES)
class TestDecomposition:
    def test_roundtrip(self, rng, scheme):
        for _ in range(100):
            c = random_tensor(rng)
            assert relative(reconstruct(decompose(c, scheme)).kelvin, c.kelvin) < 1e-12

    def test_covariants_are_harmonic(self, rng, scheme):
        t = decompose(random_tensor(rng), scheme)
        assert abs(np.trace(t.h_a)) < 1e-14 and abs(np.trace(t.h_b)) < 1e-14
        assert np.allclose(t.h_a, t.h_a.T) and np.allclose(t.h_b, t.h_b.T)
        assert is_harmonic(t.H, 1e-14)

    def test_equivariance(self, rng, scheme):
        for _ in range(20):
            c, g = random_tensor(rng), random_rotation(rng)
            lhs = decompose(ElasticityTensor(c.kelvin), scheme).rotated(g)
            rhs = decompose(rotate(c, g), scheme)
            assert lhs.allclose(rhs, atol=1e-12 * c.norm())

    def test_linearity(self, rng, scheme):
        a, b = random_tensor(rng), random_tensor(rng)
        ta, tb = decompose(a, scheme), decompose(b, scheme)
        tab = decompose(a + 2.0 * b, scheme)
        assert tab.alpha == pytest.approx(ta.alpha + 2 * tb.alpha, abs=1e-13)
        assert np.allclose(tab.H, ta.H + 2 * tb.H, atol=1e-13)

    def test_isotropic_has_no_covariants(self, scheme):
        t = decompose(isotropic_lame(3.0, 2.0), scheme)
        assert np.allclose(t.h_a, 0) and np.allclose(t.h_b, 0) and np.allclose(t.H, 0)


class TestCGHD:
    def test_isotropic_invariants(self):
        for bulk, shear in ((5.0, 3.0), (160.0, 79.3), (1.0, 0.2)):
            t = decompose(isotropic_bulk_shear(bulk, shear), "CGHD")
            assert t.alpha == pytest.approx(2 * shear, abs=1e-12 * bulk)
            assert t.beta == pytest.approx(3 * bulk, abs=1e-12 * bulk)

    def test_uti_example(self, uti_example):
        t = decompose(uti_example, "cghd")
        assert t.beta == pytest.approx(800.0, abs=1e-12)
        assert t.alpha == pytest.approx(88.0, abs=1e-12)
        assert np.allclose(t.h_b, 0.0, atol=1e-12)
        assert np.allclose(np.diag(t.h_a), [80 / 3, 80 / 3, -160 / 3])
        assert np.allclose(components_to_kelvin(t.H)[[0, 2, 3, 5], [0, 2, 3, 5]],
                           [66 / 7, 36 / 7, -36 / 7, -96 / 7])

    def test_idti_example(self, idti_example):
        t = decompose(idti_example, "CGHD")
        assert t.alpha == pytest.approx(150.0)
        assert np.allclose(t.h_a, 0.0, atol=1e-12)
        assert np.allclose(t.H, 0.0, atol=1e-12)
        assert np.allclose(np.diag(t.h_b), [-50, -50, 100])

    def test_h_b_is_deviator_of_bulk_response(self, rng):
        c = random_tensor(rng)
        t = decompose(c, "CGHD")
        r = ddot(c, ID2)
        assert np.allclose(t.h_b, r - np.trace(r) / 3 * ID2)


class TestSWHD:
    def test_lame_invariants(self):
        t = decompose(isotropic_lame(3.0, 2.0), "SWHD")
        assert t.alpha == pytest.approx(1.0)
        assert t.beta == pytest.approx(7.0)

    def test_iyti_example(self, iyti_example):
        t = decompose(iyti_example, "SWHD")
        assert t.beta == pytest.approx(10.0, abs=1e-12)
        assert t.alpha == pytest.approx(-9.0, abs=1e-12)
        assert np.allclose(t.h_b, 0.0, atol=1e-12)
        assert np.allclose(t.H, 0.0, atol=1e-12)
        assert np.allclose(np.diag(t.h_a), [1, 1, -2])

    def test_split(self, rng):
        c = random_tensor(rng).components
        cs, ca = split_sym_anti(c)
        assert np.allclose(cs, total_symmetrization(c))
        assert np.allclose(cs + ca, c)


class TestSchemes:
    def test_h_is_scheme_independent(self, rng):
        for _ in range(10):
            c = random_tensor(rng)
            assert np.allclose(decompose(c, "CGHD").H, decompose(c, "SWHD").H, atol=1e-13)

    def test_convert_scheme(self, rng):
        c = random_tensor(rng)
        t = convert_scheme(decompose(c, "CGHD"), "SWHD")
        assert t.scheme == "SWHD"
        assert t.allclose(decompose(c, "SWHD"), atol=1e-13)

    def test_unknown_scheme(self):
        assert normalize_scheme("swhd") == "SWHD"
        with pytest.raises(ValidationError):
            normalize_scheme("XYZ")

    def test_triplet_validation(self):
        z = np.zeros((3, 3))
        with pytest.raises(ValidationError):
            HarmonicTriplet(1.0, 1.0, np.zeros(3), z, np.zeros((3, 3, 3, 3)), "CGHD")
        with pytest.raises(ValidationError):
            HarmonicTriplet(1.0, 1.0, z, z, np.zeros((3, 3)), "CGHD")


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (6, 6), elements=st.floats(-1e3, 1e3)))
def test_harmonic_part_is_idempotent(a):
    c = ElasticityTensor(0.5 * (a + a.T))
    h = harmonic_part(total_symmetrization(c.components))
    scale = max(c.norm(), 1.0)
    assert is_harmonic(h, 1e-12 * scale)
    assert np.allclose(harmonic_part(h), h, atol=1e-12 * scale)
