"""Acceptance suite: eleven structural criteria, all in exact rational
arithmetic with zero tolerance.  Each test prints a single pass line on
success; a failure line comes from pytest itself.

Shared corpus: tests/corpus.py (26 modules over FI and OI at window 7).
"""

import math

from sheafrep.artin import build_S_lambda, invariants_F, phi_module
from sheafrep.combinat import (
    Partition,
    add_boxes_distinct_columns,
    hook_dimension,
    pad_uniform,
    partitions_of,
)
from sheafrep.linalgq import RationalMatrix, Subspace, row_space
from sheafrep.modcore import (
    cokernel_morphism,
    direct_sum,
    find_isomorphism,
    free_module,
    kernel_morphism,
    quotient,
    simple_at,
)
from sheafrep.nakayama import (
    fi_sheaf_check_invariants,
    generation_degree,
    inverse_nakayama,
    is_saturated,
    nakayama_nu,
    presentation_degree,
    sheafify,
    simple_saturated,
    simple_saturated_oi,
)
from sheafrep.oimod import kn_by_intersection
from sheafrep.skelcat import CatKind, OreFailure, kronecker_quiver_category, left_ore_check
from sheafrep.symrep import cycle_types, mn_character
from sheafrep.torsion import h0_local, torsion_submodule

from corpus import build_corpus, tail_submodule_of_p0


def _report(number, label):
    print(f"CRITERION {number} ({label}): PASS", flush=True)


def _small_partitions(max_size):
    return [lam for n in range(max_size + 1) for lam in partitions_of(n)]


def _degreewise_characters(v):
    return tuple(
        tuple(sorted((str(k), m) for k, m in v.decompose_degree(n).items()))
        for n in range(v.window + 1)
        if v.dims[n]
    )


def test_criterion_01_simple_sheaf_classification():
    window = 8
    built = []
    for lam in _small_partitions(4):
        v = simple_saturated(lam, window)
        bottom = lam.size + (lam.parts[0] if lam.parts else 0)
        for n in range(window + 1):
            if n < bottom:
                assert v.dims[n] == 0, (lam, n)
            else:
                assert v.decompose_degree(n) == {pad_uniform(lam, n): 1}, (lam, n)
        assert is_saturated(v), lam
        built.append((lam, v))
    # pairwise non-isomorphic: distinct dimension sequences or characters
    signatures = {}
    for lam, v in built:
        sig = (tuple(v.dims), _degreewise_characters(v))
        assert sig not in signatures, (lam, signatures[sig])
        signatures[sig] = lam
    _report(1, "simple saturated modules classified")


def test_criterion_02_sheafification_pipeline():
    corpus = build_corpus(7)
    assert len(corpus) >= 20
    for name, v in corpus.items():
        sheaf, unit = sheafify(v)
        _, unit2 = sheafify(sheaf)
        assert unit2.is_isomorphism(), f"{name}: not idempotent"
        ker, ker_incl = kernel_morphism(unit)
        tau = torsion_submodule(v)
        assert ker.dims == tau.torsion_part.dims, f"{name}: unit kernel != torsion"
        for n in range(v.window + 1):
            assert row_space(ker_incl.comps[n].transpose()) == row_space(
                tau.inclusion.comps[n].transpose()
            ), (name, n)
        cok, _ = cokernel_morphism(unit)
        cok_torsion = torsion_submodule(cok).torsion_part
        assert cok_torsion.dims == cok.dims, f"{name}: unit cokernel not torsion"
        if v.kind == CatKind.FI:
            g = generation_degree(v)
            assert v.window >= 2 * g + 1, f"{name}: window below the invariants-check range"
            assert fi_sheaf_check_invariants(v) == is_saturated(v), name
    _report(2, "sheafification pipeline on a 26-module corpus")


def _truncate(v, top):
    spaces = []
    for n in range(v.window + 1):
        dim = v.dims[n]
        if n <= top:
            spaces.append(Subspace(dim, RationalMatrix.zeros(0, dim)))
        else:
            spaces.append(row_space(RationalMatrix.identity(dim)))
    out, _ = quotient(v, spaces)
    return out


def _fd_family():
    """Representative fd modules with support <= 4 and total dimension <= 12.

    A simple concentrated at degree n with shape lam pulls back to the
    saturated module with bottom degree n + lam_1, so each member carries
    the smallest window on which the round trip can be observed:
    max over its factors of (degree + lam_1 + 1).
    """
    fam = []
    for lam in _small_partitions(4):
        top = lam.parts[0] if lam.parts else 0
        window = lam.size + top + 1
        fam.append(simple_at(lam, max(window, 2)))
    w7 = 7
    fam.append(direct_sum(simple_at(Partition((1,)), w7), simple_at(Partition((2,)), w7)))
    fam.append(direct_sum(simple_at(Partition(()), w7), simple_at(Partition((1, 1)), w7)))
    fam.append(
        direct_sum(
            simple_at(Partition(()), w7),
            direct_sum(simple_at(Partition((1,)), w7), simple_at(Partition((2, 1)), w7)),
        )
    )
    fam.append(
        direct_sum(simple_at(Partition((2, 2)), 8), simple_at(Partition((1, 1, 1, 1)), 8))
    )
    # fd modules with nonzero structure maps: truncations of projectives
    fam.append(_truncate(free_module(CatKind.FI, 0, w7), 3))
    fam.append(_truncate(free_module(CatKind.FI, 1, w7), 3))
    return fam


def test_criterion_03_nu_inverse_nu_is_identity():
    family = _fd_family()
    assert len(family) >= 15
    for w in family:
        assert sum(w.dims) <= 12 and all(w.dims[n] == 0 for n in range(5, w.window + 1))
        v = inverse_nakayama(w, w.window)
        back = nakayama_nu(v)
        iso = find_isomorphism(back, w)
        assert iso is not None, w.dims
        assert iso.is_isomorphism() and iso.validate().ok
    _report(3, "nu o nu^{-1} isomorphic to the identity on fd modules")


def test_criterion_04_shift_identity():
    from sheafrep.modcore import shift

    window = 7
    for n in range(1, 4):
        sigma = shift(free_module(CatKind.FI, n, window))
        expected = free_module(CatKind.FI, n, window - 1)
        lower = free_module(CatKind.FI, n - 1, window - 1)
        for _ in range(n):
            expected = direct_sum(expected, lower)
        iso = find_isomorphism(sigma, expected)
        assert iso is not None and iso.is_isomorphism(), n
    # shift of the first saturated simple is the first projective
    sigma_l1 = shift(simple_saturated(Partition((1,)), window))
    p1 = free_module(CatKind.FI, 1, window - 1)
    iso = find_isomorphism(sigma_l1, p1)
    assert iso is not None and iso.is_isomorphism()
    _report(4, "shift of projectives and of the standard simple")


def test_criterion_05_local_cohomology_equals_torsion():
    for name, v in build_corpus(7).items():
        _, _, spaces = h0_local(v)
        dec = torsion_submodule(v)
        for n in range(v.window + 1):
            assert spaces[n] == row_space(dec.inclusion.comps[n].transpose()), (name, n)
    _report(5, "degree-zero local cohomology equals the torsion submodule")


def test_criterion_06_saturation_defect():
    from sheafrep.torsion import saturation_defect

    window = 7
    tail = tail_submodule_of_p0(window)
    defect = saturation_defect(tail)
    expected = simple_at(Partition(()), window)
    assert defect.dims == expected.dims
    iso = find_isomorphism(defect, expected)
    assert iso is not None and iso.is_isomorphism()
    corpus = build_corpus(window)
    for name in ["fi_p0", "fi_p1", "fi_p2", "fi_p_11", "fi_p_2", "fi_p_21"]:
        assert saturation_defect(corpus[name]).is_zero(), name
    _report(6, "saturation defect: one simple for the tail submodule, zero for projectives")


def test_criterion_07_artin_correspondence():
    for n in range(4):
        for i in range(7):
            m = max(i, n) + 1
            expected = math.factorial(i) // math.factorial(i - n) if i >= n else 0
            dims = [invariants_F(n, i, mm).dim for mm in (m, m + 1, m + 2)]
            assert dims == [expected] * 3, (n, i, dims)
    for n in range(4):
        window = 4
        v = phi_module(n, window, window + n + 1)
        p = free_module(CatKind.FI, n, window)
        iso = find_isomorphism(v, p)
        assert iso is not None and iso.is_isomorphism(), n
    _report(7, "open-stabilizer invariants have representable dimensions; phi(F(n)) = P(n)")


def test_criterion_08_simple_socles_group_side():
    lam = Partition((1,))
    window = 5
    horizon = window + 2 + 1
    v = phi_module(build_S_lambda(lam, horizon), window, horizon)
    l1 = simple_saturated(lam, window)
    assert v.dims == l1.dims
    for n in range(window + 1):
        if v.dims[n]:
            assert v.decompose_degree(n) == l1.decompose_degree(n), n
    bounds = presentation_degree(v)
    assert bounds.gen_degree == 2
    assert bounds.presentation_degree == 3
    _report(8, "phi(S((1))) is the standard simple with presentation degree 3")


def test_criterion_09_oi_simples():
    window = 8
    for n in range(3):
        kn = kn_by_intersection(n, window)
        ln = simple_saturated_oi(n, window)
        iso = find_isomorphism(kn, ln)
        assert iso is not None and iso.is_isomorphism(), n
    k0 = kn_by_intersection(0, window)
    p0 = free_module(CatKind.OI, 0, window)
    assert k0.dims == p0.dims
    for n in range(window):
        assert k0.maps[n] == p0.maps[n], n
    _report(9, "K_n matches the saturated OI simples; K_0 is P(0) on the nose")


def test_criterion_10_ore_gate():
    for kind in (CatKind.FI, CatKind.OI):
        witnesses = left_ore_check(kind, 4)
        assert isinstance(witnesses, list) and witnesses, kind
    failure = left_ore_check(kronecker_quiver_category(), 4)
    assert isinstance(failure, OreFailure)
    assert {failure.f, failure.f_prime} == {"alpha", "beta"}
    _report(10, "Ore condition holds for FI and OI, fails on the Kronecker quiver")


def test_criterion_11_combinatorial_backbone():
    for n in range(9):
        assert sum(hook_dimension(lam) ** 2 for lam in partitions_of(n)) == math.factorial(n)
    for n in range(1, 8):
        cts = cycle_types(n)
        lams = partitions_of(n)
        table = [[mn_character(lam, ct) for ct in cts] for lam in lams]
        order = math.factorial(n)
        for a in range(len(lams)):
            for b in range(len(lams)):
                inner = sum(ct.class_size * x * y for ct, x, y in zip(cts, table[a], table[b]))
                assert inner == (order if a == b else 0)
    for lam in _small_partitions(4):
        for k in range(5):
            lhs = sum(hook_dimension(mu) for mu in add_boxes_distinct_columns(lam, k))
            rhs = hook_dimension(lam) * math.comb(lam.size + k, k)
            assert lhs == rhs, (lam, k)
    _report(11, "dimension square sum, character orthogonality, and the Pieri identity")
