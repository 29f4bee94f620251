import numpy as np
import pytest

from exotela import ElasticityTensor, SingularTensorError, ValidationError
from exotela.catalog import ALIASES, catalog, covariant_groups, find_entry, match_signature
from exotela.clips import StructureSignature
from exotela.exotic import (
    OUT_OF_SCOPE,
    classify_material,
    directions,
    inversion_stability,
    sample_random,
    totally_symmetric_part,
    young_modulus,
    young_surface,
)
from exotela.harmonic import decompose
from exotela.labels import D2, D3, D4, O2, OCTA, SO3, TRICLINIC, Z2, parse_label
from exotela.normal_forms import (
    cubic,
    isotropic_deviatoric_ti,
    isotropic_lame,
    isotropic_young_ti,
    normal_form,
    transversely_isotropic,
    uncoupled_ti,
)
from exotela.tensor import invert, is_positive_definite, random_rotation, rotate

from helpers import random_spd


def sig(text):
    return StructureSignature.from_labels(text.split())


class TestCatalog:
    def test_counts(self):
        entries = catalog()
        assert len(entries) == 26
        assert sum(e.generic for e in entries) == 8
        assert sum(not e.generic for e in entries) == 18
        assert {e.overall for e in entries if e.generic} == {
            SO3, OCTA, O2, D4, D3, D2, Z2, TRICLINIC}

    def test_labels_unique(self):
        labels = [e.label for e in catalog()]
        assert len(set(labels)) == 26
        assert "O(2)^e_6" in labels and "1^g" in labels

    @pytest.mark.parametrize("label, row, material", [
        ("O(2)^e_2", "O(2) SO(3) O(2) O(2) O(2) O(2) O(2)", "UTI"),
        ("O(2)^e_5", "SO(3) O(2) SO(3) O(2) SO(3) O(2) O(2)", "IDTI"),
        ("O(2)^e_6", "O(2) SO(3) SO(3) O(2) O(2) SO(3) O(2)", "IYTI"),
        ("D3^e_5", "SO(3) O(2) O O(2) O D3 D3", None),
        ("D4^e_3", "O(2) O(2) O O(2) D4 D4 D4", None),
        ("SO(3)^g", "SO(3) SO(3) SO(3) SO(3) SO(3) SO(3) SO(3)", None),
        ("Z2^g", "D2 D2 Z2 Z2 Z2 Z2 Z2", None),
    ])
    def test_rows(self, label, row, material):
        e = find_entry(label)
        assert e.signature == sig(row)
        assert e.material == material
        assert match_signature(sig(row)) is e

    @pytest.mark.parametrize("key, label", [
        ("UTI", "O(2)^e_2"), ("idti", "O(2)^e_5"), ("IYTI", "O(2)^e_6"),
        ("TI", "O(2)^g"), ("cubic", "O^g"), ("isotropic", "SO(3)^g"),
        ("[D_4]^e_3", "D4^e_3"), ("O(2)^{e}_{1}", "O(2)^e_1"), ("D3", "D3^g"),
        ("orthotropic", "D2^g"),
    ])
    def test_find_entry(self, key, label):
        assert find_entry(key).label == label

    def test_aliases_resolve(self):
        for alias in ALIASES:
            assert find_entry(alias).generic

    @pytest.mark.parametrize("key", ["O(2)^e_7", "D2^e_1", "nothing", "O^e_1"])
    def test_unknown(self, key):
        with pytest.raises(ValidationError):
            find_entry(key)

    def test_material_bindings(self):
        assert (find_entry("UTI").role, find_entry("UTI").scheme) == ("stiffness", "CGHD")
        assert (find_entry("IYTI").role, find_entry("IYTI").scheme) == ("compliance", "SWHD")

    def test_covariant_groups_contain_overall(self):
        for e in catalog():
            if not e.high:
                continue
            ka, kb, kh = covariant_groups(e)
            assert (ka.label, kb.label, kh.label) == e.signature.singletons


class TestNormalForms:
    def test_idti_example(self, idti_example):
        assert np.array_equal(normal_form("IDTI", 350, 200, 250).kelvin, idti_example.kelvin)

    def test_iyti_example(self, iyti_example):
        assert np.array_equal(normal_form("iyti", 10, -2, -3).kelvin, iyti_example.kelvin)

    def test_uti_shear(self, uti_example):
        k = normal_form("UTI", 350, 200, 250, 60).kelvin
        assert np.array_equal(k[:5, :5], uti_example.kelvin[:5, :5])
        assert k[5, 5] == 150.0 and uti_example.kelvin[5, 5] == 120.0

    def test_ti_family_66_entry(self):
        for c in (transversely_isotropic(9, 2, 3, 7, 4), uncoupled_ti(9, 2, 3, 4),
                  isotropic_deviatoric_ti(9, 2, 3), isotropic_young_ti(9, 2, 3)):
            assert c.kelvin[5, 5] == 7.0

    def test_parameter_count(self):
        with pytest.raises(ValidationError):
            normal_form("UTI", 1, 2, 3)
        with pytest.raises(ValidationError):
            normal_form("hexagonal", 1, 2)
        with pytest.raises(ValidationError):
            normal_form("isotropic", 1, float("nan"))


class TestClassifyMaterial:
    def test_idti_example(self, idti_example):
        r = classify_material(idti_example)
        assert r.material == "IDTI" and r.label == "O(2)^e_5"
        assert r.material_residual("IDTI") < 1e-12
        assert r.positive_definite

    def test_iyti_example(self, iyti_example):
        r = classify_material(invert(iyti_example))
        assert r.material == "IYTI" and r.analysis == "compliance/SWHD"
        assert r.material_residual("IYTI") < 1e-12

    def test_rotated_uti(self, rng):
        for _ in range(5):
            c = rotate(uncoupled_ti(350.0, 200.0, 250.0, 90.0), random_rotation(rng))
            r = classify_material(c)
            assert r.material == "UTI"
            assert "h_b" in r.vanishing["stiffness/CGHD"]

    def test_printed_uti_matrix_is_tetragonal(self, uti_example):
        r = classify_material(uti_example)
        assert r.label == "D4^e_2" and r.material is None
        assert r.residuals["stiffness/CGHD"]["h_b"] < 1e-15

    def test_generic_is_out_of_scope(self, rng):
        r = classify_material(random_spd(rng))
        assert r.overall == TRICLINIC
        assert r.note == OUT_OF_SCOPE

    def test_cubic_and_isotropic(self, rng):
        assert classify_material(rotate(cubic(300, 100, 150), random_rotation(rng))).label == "O^g"
        assert classify_material(isotropic_lame(2.0, 1.0)).label == "SO(3)^g"

    def test_singular_tensor_skips_compliance(self):
        k = np.diag([1.0, 1.0, 1.0, 1.0, 1.0, 0.0])
        r = classify_material(k)
        assert "compliance/SWHD" not in r.matches
        assert not r.positive_definite


class TestInversion:
    def test_uti_is_stable(self, uti_example):
        assert inversion_stability(uncoupled_ti(350.0, 200.0, 250.0, 90.0), "UTI").survives
        assert inversion_stability(uti_example).survives
        assert np.linalg.norm(decompose(invert(uti_example)).h_b) < 1e-15

    def test_idti_is_not_stable(self, idti_example):
        r = inversion_stability(idti_example, "IDTI")
        assert not r.survives
        assert r.inverse.overall == O2
        assert r.inverse.material_residual("IDTI") > 1e-6

    def test_iyti_is_not_stable(self, iyti_example):
        assert not inversion_stability(invert(iyti_example), "IYTI").survives

    def test_wrong_label(self, idti_example):
        with pytest.raises(ValidationError):
            inversion_stability(idti_example, "UTI")


class TestSampling:
    def test_deterministic(self):
        a, b = sample_random("D3^e_5", 7), sample_random("D3^e_5", 7)
        assert np.array_equal(a.kelvin, b.kelvin)
        assert not np.array_equal(a.kelvin, sample_random("D3^e_5", 8).kelvin)

    @pytest.mark.parametrize("entry", [e.label for e in catalog()])
    def test_positive_definite_and_recovered(self, entry):
        c = sample_random(entry, 3)
        assert is_positive_definite(c)
        assert classify_material(c).label == entry


class TestYoung:
    def test_iyti_is_constant(self, iyti_example, rng):
        n = rng.normal(size=(500, 3))
        n /= np.linalg.norm(n, axis=1)[:, None]
        e = np.array([young_modulus(iyti_example, v) for v in n])
        assert np.ptp(e) < 1e-13 and e[0] == pytest.approx(0.1)

    def test_isotropic(self):
        s = invert(isotropic_lame(1.0, 1.0))
        assert young_modulus(s, [0.0, 0.6, 0.8]) == pytest.approx(1.0 / s.kelvin[0, 0])

    def test_totally_symmetric_part_suffices(self, rng):
        s = invert(random_spd(rng))
        ss = totally_symmetric_part(s)
        for v in directions(rng.uniform(0, np.pi, 10), rng.uniform(0, 2 * np.pi, 10)):
            assert young_modulus(ss, v) == pytest.approx(young_modulus(s, v), rel=1e-12)

    def test_surface(self, iyti_example):
        surf = young_surface(iyti_example, 5, 8)
        assert surf.E.shape == (5, 8)
        rows = list(surf.rows())
        assert len(rows) == 40 and rows[0][:2] == (0.0, 0.0)
        assert np.allclose(surf.E, 0.1)

    def test_errors(self, iyti_example):
        with pytest.raises(ValidationError):
            young_modulus(iyti_example, [1.0, 1.0, 0.0])
        with pytest.raises(SingularTensorError):
            young_modulus(ElasticityTensor(-np.eye(6)), [1.0, 0.0, 0.0])
        with pytest.raises(ValidationError):
            young_surface(iyti_example, 1, 4)


def test_parse_label_accepts_catalog_classes():
    for e in catalog():
        assert parse_label(str(e.overall)) == e.overall
