from sheafrep.combinat import Partition, pad_uniform, partitions_of
from sheafrep.modcore import (
    cokernel_morphism,
    direct_sum,
    find_isomorphism,
    free_module,
    kernel_morphism,
    simple_at,
    simple_at_oi,
)
from sheafrep.nakayama import (
    composition_factors_sheaf,
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
from sheafrep.skelcat import CatKind
from sheafrep.torsion import torsion_submodule

from corpus import build_corpus, tail_submodule_of_p0

W = 6


def test_nu_kills_torsion():
    for s in [simple_at(Partition((1,)), W), simple_at_oi(1, W)]:
        w = nakayama_nu(s)
        assert w.is_zero()


def test_nu_of_projective_is_fd():
    # degree x of nu P(m) has dimension #Inj([x],[m]); support stops at m
    import math

    for m in range(3):
        w = nakayama_nu(free_module(CatKind.FI, m, W))
        for x in range(W + 1):
            expected = math.factorial(m) // math.factorial(m - x) if x <= m else 0
            assert w.dims[x] == expected, (m, x)


def test_nu_inverse_nu_round_trip_on_fd():
    v = simple_saturated(Partition((1,)), W)
    w = nakayama_nu(v)
    back = inverse_nakayama(w, W)
    iso = find_isomorphism(back, v)
    assert iso is not None and iso.is_isomorphism()


def test_sheafify_unit_is_iso_on_projectives():
    for m in range(3):
        v = free_module(CatKind.FI, m, W)
        sheaf, unit = sheafify(v)
        assert unit.is_isomorphism()
        assert is_saturated(v)


def test_sheafify_tail_submodule_gives_p0():
    v = tail_submodule_of_p0(W)
    sheaf, unit = sheafify(v)
    assert sheaf.dims == (1,) * (W + 1)
    ker, _ = kernel_morphism(unit)
    assert ker.is_zero()  # v is separated
    cok, _ = cokernel_morphism(unit)
    assert cok.dims == (1,) + (0,) * W


def test_unit_kernel_is_torsion_submodule_on_corpus():
    for name, v in build_corpus(W).items():
        _, unit = sheafify(v)
        ker, _ = kernel_morphism(unit)
        assert ker.dims == torsion_submodule(v).torsion_part.dims, name


def test_simple_saturated_dimensions_and_characters():
    for lam in [Partition(()), Partition((1,)), Partition((2,)), Partition((1, 1))]:
        v = simple_saturated(lam, W)
        bottom = lam.size + (lam.parts[0] if lam.parts else 0)
        for n in range(W + 1):
            if n < bottom:
                assert v.dims[n] == 0
            else:
                assert v.decompose_degree(n) == {pad_uniform(lam, n): 1}
        assert is_saturated(v)


def test_simple_saturated_oi_matches_fi_dims_for_small_n():
    # OI saturated simples have binomial dimensions
    import math

    for m in range(3):
        v = simple_saturated_oi(m, W)
        for n in range(W + 1):
            expected = math.comb(n - m, m) if n >= 2 * m else 0
            assert v.dims[n] == expected, (m, n)


def test_saturation_flags_on_corpus():
    c = build_corpus(W)
    assert is_saturated(c["fi_p0"])
    assert is_saturated(c["fi_l_1"])
    assert not is_saturated(c["fi_t_empty"])
    assert not is_saturated(c["fi_tail_p0"])
    assert is_saturated(c["oi_k1"])


def test_invariants_check_matches_saturation():
    c = build_corpus(7)
    for name, v in c.items():
        if v.kind != CatKind.FI:
            continue
        g = generation_degree(v)
        if v.window < 2 * g + 1:
            continue
        assert fi_sheaf_check_invariants(v) == is_saturated(v), name


def test_composition_factors():
    p1 = free_module(CatKind.FI, 1, W)
    assert composition_factors_sheaf(p1) == {Partition(()): 1, Partition((1,)): 1}
    l1 = simple_saturated(Partition((1,)), W)
    assert composition_factors_sheaf(l1) == {Partition((1,)): 1}


def test_generation_and_presentation_degrees():
    l1 = simple_saturated(Partition((1,)), W)
    bounds = presentation_degree(l1)
    assert generation_degree(l1) == 2
    assert bounds.gen_degree == 2
    assert bounds.rel_degree == 3
    assert bounds.presentation_degree == 3

    p1 = free_module(CatKind.FI, 1, W)
    assert presentation_degree(p1).presentation_degree == 1


def test_nu_naturality_on_direct_sum():
    a = simple_saturated(Partition((1,)), W)
    b = free_module(CatKind.FI, 0, W)
    w_sum = nakayama_nu(direct_sum(a, b))
    wa = nakayama_nu(a)
    wb = nakayama_nu(b)
    assert w_sum.dims == tuple(x + y for x, y in zip(wa.dims, wb.dims))
