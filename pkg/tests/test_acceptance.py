"""Acceptance criteria; each test prints one PASS/FAIL line."""

from fractions import Fraction

import numpy as np

from exotela import AmbiguousClassError, ElasticityTensor
from exotela.catalog import catalog
from exotela.clips import clips_pair, derive_space_classes, enumerate_structures
from exotela.covariants import geometric_structure, is_cubic
from exotela.exotic import classify_material, sample_random, young_modulus
from exotela.fixspace import coords_to_h4, fixed_basis
from exotela.groups import ClassedGroup
from exotela.harmonic import HarmonicTriplet, decompose, reconstruct
from exotela.labels import D2, D3, D4, ELASTICITY_CLASSES, O2, OCTA, SO3, TRICLINIC, Z2
from exotela.normal_forms import cubic, isotropic_bulk_shear
from exotela.projection import nearest_in_structure
from exotela.tensor import invert, isotropic_projectors, random_rotation, rotate, spectrum

from conftest import IDTI_EXAMPLE, IYTI_EXAMPLE, UTI_EXAMPLE, record_acceptance
from helpers import random_deviator, random_spd, random_tensor
from test_labels_clips import STRUCTURES, TABLE, label, resolve

SEED = 20240611


def verdict(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} [{number:2d}] {title}: {detail}"
    record_acceptance(line)
    print(line)
    assert ok, line


def test_01_round_trip():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        c = random_tensor(rng)
        for scheme in ("CGHD", "SWHD"):
            back = reconstruct(decompose(c, scheme))
            worst = max(worst, np.linalg.norm(back.kelvin - c.kelvin) / c.norm())
    verdict(1, "round trip, 1000 tensors, both schemes", worst < 1e-10,
            f"worst relative error {worst:.2e} (< 1e-10)")


def test_02_equivariance():
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for scheme in ("CGHD", "SWHD"):
        for _ in range(200):
            c, g = random_tensor(rng), random_rotation(rng)
            a = decompose(c, scheme).rotated(g)
            b = decompose(rotate(c, g), scheme)
            err = max(abs(a.alpha - b.alpha), abs(a.beta - b.beta),
                      np.abs(a.h_a - b.h_a).max(), np.abs(a.h_b - b.h_b).max(),
                      np.abs(a.H - b.H).max()) / c.norm()
            worst = max(worst, err)
    verdict(2, "equivariance, 200 pairs per scheme", worst < 1e-9,
            f"worst relative deviation {worst:.2e} (< 1e-9)")


def test_03_isotropic_invariants():
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for _ in range(100):
        bulk, shear = rng.uniform(0.1, 300.0, 2)
        t = decompose(isotropic_bulk_shear(bulk, shear), "CGHD")
        worst = max(worst, abs(t.alpha - 2 * shear) / shear, abs(t.beta - 3 * bulk) / bulk)
    verdict(3, "isotropic CGHD alpha = 2G, beta = 3K", worst < 1e-12,
            f"worst relative error {worst:.2e} (< 1e-12)")


def test_04_spectra():
    r51, r19 = np.sqrt(51.0), np.sqrt(19.0)
    cases = [
        (UTI_EXAMPLE, [800, 150, 50, 60, 60, 120]),
        (IDTI_EXAMPLE, [50 * (10 - r51), 50 * (10 + r51), 150, 150, 150, 150]),
        (IYTI_EXAMPLE, [9 - r19, 9 + r19, 13, 13, 12, 12]),
    ]
    errs = [np.abs(spectrum(ElasticityTensor(m)) - np.sort(w)).max() for m, w in cases]
    verdict(4, "Kelvin spectra of the three worked examples", max(errs) < 1e-9,
            "max abs errors " + ", ".join(f"{e:.1e}" for e in errs) + " (< 1e-9)")


def test_05_uti_checks():
    c = ElasticityTensor(UTI_EXAMPLE)
    t = decompose(c, "CGHD")
    hb = np.abs(t.h_b).max()
    r = (c.kelvin @ np.r_[1.0, 1.0, 1.0, 0.0, 0.0, 0.0])
    spherical = np.abs(r[:3] - r[0]).max() + np.abs(r[3:]).max()
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    for _ in range(100):
        h = random_deviator(rng)
        v = np.r_[np.diag(h), np.sqrt(2) * h[1, 2], np.sqrt(2) * h[0, 2], np.sqrt(2) * h[0, 1]]
        ch = c.kelvin @ v
        worst = max(worst, abs(ch[:3].sum()) / (c.norm() * np.linalg.norm(v)))
    ok = hb < 1e-12 and spherical == 0.0 and worst < 1e-10
    verdict(5, "UTI example: h_b = 0, C:1 proportional to 1, tr(C:h) = 0", ok,
            f"|h_b| {hb:.1e}, C:1 = {r[0]:g} 1 (deviation {spherical:g}), "
            f"worst tr(C:h) {worst:.1e}")


def test_06_idti_checks():
    third = Fraction(1, 3)
    j = [[(1 if i == k else 0) - (third if i < 3 and k < 3 else 0) for k in range(6)]
         for i in range(6)]
    c = [[Fraction(int(x)) for x in row] for row in IDTI_EXAMPLE]

    def mul(a, b):
        return [[sum(a[i][m] * b[m][k] for m in range(6)) for k in range(6)] for i in range(6)]

    exact = mul(mul(j, c), j) == [[150 * x for x in row] for row in j]
    _, jf, _ = isotropic_projectors()
    jk = jf.kelvin
    float_err = np.abs(jk @ IDTI_EXAMPLE @ jk - 150 * jk).max() / 150
    t = decompose(invert(ElasticityTensor(IDTI_EXAMPLE)), "CGHD")
    s_norm = np.linalg.norm(invert(ElasticityTensor(IDTI_EXAMPLE)).kelvin)
    residual = max(np.linalg.norm(t.h_a), np.linalg.norm(t.H)) / s_norm
    ok = exact and float_err < 1e-12 and residual > 1e-6
    verdict(6, "IDTI example: J:C:J = 150 J, compliance not IDTI", ok,
            f"exact in rationals: {exact}, float deviation {float_err:.1e}, "
            f"compliance IDTI residual {residual:.2e} (> 1e-6)")


def test_07_iyti_young():
    s = ElasticityTensor(IYTI_EXAMPLE)
    rng = np.random.default_rng(SEED + 7)
    n = rng.normal(size=(10_000, 3))
    n /= np.linalg.norm(n, axis=1)[:, None]
    q = np.array([1.0 / young_modulus(s, v) for v in n])
    spread = q.max() - q.min()
    ok = spread < 1e-10 and abs(q.mean() - 10.0) < 1e-10
    verdict(7, "IYTI example: S::n^4 = 10 on 10^4 directions", ok,
            f"mean {q.mean():.15g}, spread {spread:.1e} (< 1e-10)")


def test_08_clips_engine():
    params = range(2, 13)
    cells = mismatches = 0
    for (row, col), cell in TABLE.items():
        for m in (params if row in "ZD" else [0]):
            for n in (params if col in "ZD" else [0]):
                cells += 1
                if set(clips_pair(label(row, m), label(col, n))) != resolve(cell, m, n):
                    mismatches += 1
    classes = derive_space_classes([(0, 2), (2, 2), (4, 1)])
    ok = mismatches == 0 and set(classes) == set(ELASTICITY_CLASSES) and len(classes) == 8
    verdict(8, "clips table and the 8 elasticity classes", ok,
            f"{cells - mismatches}/{cells} table instances reproduced; derived {classes}")


def test_09_enumeration():
    counts = {str(g): len(enumerate_structures(g)) - 1 for g in (D3, D4, O2, OCTA, SO3)}
    rows_ok = all([" ".join(str(x) for x in s.six) for s in enumerate_structures(g)]
                  == STRUCTURES[g] for g in STRUCTURES)
    ok = (rows_ok and sum(counts.values()) == 18
          and counts == {"D3": 6, "D4": 6, "O(2)": 6, "O": 0, "SO(3)": 0})
    verdict(9, "18 exotic structures", ok,
            f"exotic counts {counts}, rows match table: {rows_ok}")


def test_10_cubic_characterization():
    rng = np.random.default_rng(SEED + 10)
    hits = perturbed_hits = 0
    for _ in range(50):
        params = rng.uniform([200.0, 50.0, 20.0], [400.0, 150.0, 200.0])
        c = rotate(cubic(*params), random_rotation(rng))
        hits += is_cubic(c) and classify_material(c).overall == OCTA
        e = rng.normal(size=(6, 6))
        e = 0.5 * (e + e.T)
        noisy = ElasticityTensor(c.kelvin + 1e-2 * c.norm() * e / np.linalg.norm(e))
        perturbed_hits += is_cubic(noisy)
    ok = hits == 50 and perturbed_hits == 0
    verdict(10, "cubic characterization", ok,
            f"{hits}/50 rotated cubic detected, {perturbed_hits}/50 perturbed misdetected")


def test_11_closed_loop():
    wrong, ambiguous, total, worst_rate = [], 0, 0, 1.0
    for entry in catalog():
        good = 0
        for seed in range(20):
            total += 1
            try:
                got = classify_material(sample_random(entry, seed)).label
            except AmbiguousClassError:
                ambiguous += 1
                continue
            if got == entry.label:
                good += 1
            else:
                wrong.append((entry.label, seed, got))
        worst_rate = min(worst_rate, good / 20)
    ok = not wrong and (total - ambiguous) / total >= 0.99
    verdict(11, "closed-loop classification, 26 entries x 20 seeds", ok,
            f"{total - ambiguous - len(wrong)}/{total} recovered, {ambiguous} ambiguous, "
            f"{len(wrong)} wrong labels")


def test_12_projection():
    worst = 0.0
    for entry in catalog():
        if not entry.high:
            continue
        for seed in range(20):
            c = sample_random(entry, seed)
            if entry.role == "compliance":
                c = invert(c)
            worst = max(worst, nearest_in_structure(c, entry, seed=seed).relative_distance)

    rng = np.random.default_rng(SEED + 12)
    idem = equi = 0.0
    for target in ("TI", "UTI", "IDTI", "D4^e_3", "D3^g", "cubic"):
        c = random_spd(rng)
        first = nearest_in_structure(c, target)
        idem = max(idem, nearest_in_structure(first.tensor, target).relative_distance)
        moved = nearest_in_structure(rotate(c, random_rotation(rng)), target)
        equi = max(equi, abs(moved.distance - first.distance) / c.norm())
    ok = worst < 1e-6 and idem < 1e-10 and equi < 1e-8
    verdict(12, "projection onto structures", ok,
            f"in-structure worst {worst:.1e} (< 1e-6), idempotence {idem:.1e} (< 1e-10), "
            f"distance equivariance {equi:.1e} (< 1e-8)")


def test_13_coaxial_pairs():
    rng = np.random.default_rng(SEED + 13)
    classes = (TRICLINIC, Z2, D2, D3, D4, O2, OCTA)
    unequal, seen = 0, set()
    for i in range(100):
        g = random_rotation(rng)
        axis = np.diag([1.0, 1.0, -2.0])
        h_a, h_b = g @ (rng.uniform(0.5, 2) * axis) @ g.T, g @ (-rng.uniform(0.5, 2) * axis) @ g.T
        group = ClassedGroup(classes[i % len(classes)])
        if i % 2:
            # coaxial with the covariants half of the time
            group = group.rotated(g)
        else:
            group = group.rotated(random_rotation(rng))
        basis = fixed_basis(group, 4)
        big_h = coords_to_h4(basis @ rng.uniform(0.5, 1.0, basis.shape[1]))
        c = reconstruct(HarmonicTriplet(3.0, 4.0, h_a, h_b, big_h, "CGHD"))
        st = geometric_structure(c)
        seen.add(st.signature.aH)
        unequal += st.signature.aH != st.signature.bH
    verdict(13, "coaxial transversely isotropic pairs have equal pair classes", unequal == 0,
            f"{100 - unequal}/100 equal; pair classes seen {sorted(str(x) for x in seen)}")

