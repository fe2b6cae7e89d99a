import math

from gmpy2 import mpq

from sheafrep.combinat import Partition
from sheafrep.linalgq import RationalMatrix
from sheafrep.modcore import (
    ModuleMorphism,
    cokernel_morphism,
    direct_sum,
    find_isomorphism,
    free_module,
    generation_degree_scan,
    identity_morphism,
    induced_projective,
    kernel_morphism,
    module_morphism_space,
    module_morphism_space_dense,
    shift,
    simple_at,
    simple_at_oi,
    zero_module,
)
from sheafrep.skelcat import CatKind, Injection

from corpus import augmentation_morphism, build_corpus

W = 5


def test_free_module_dimensions():
    for m in range(4):
        fi = free_module(CatKind.FI, m, W)
        oi = free_module(CatKind.OI, m, W)
        for n in range(W + 1):
            expected_fi = math.factorial(n) // math.factorial(n - m) if n >= m else 0
            assert fi.dims[n] == expected_fi
            assert oi.dims[n] == (math.comb(n, m) if n >= m else 0)
        assert fi.validate().ok and oi.validate().ok
        assert fi.bounds[0] == m and oi.bounds[0] == m


def test_free_module_functoriality():
    # morphism_matrix must respect composition
    v = free_module(CatKind.FI, 1, 4)
    f = Injection(1, 2, (2,))
    g = Injection(2, 4, (3, 1))
    from sheafrep.skelcat import compose

    assert v.morphism_matrix(compose(g, f)) == v.morphism_matrix(g) @ v.morphism_matrix(f)


def test_induced_projective_matches_free_for_single_box():
    p = induced_projective(Partition((1,)), W)
    f = free_module(CatKind.FI, 1, W)
    assert p.dims == f.dims
    iso = find_isomorphism(p, f, trials=10)
    assert iso is not None and iso.is_isomorphism()


def test_decompose_degree_p1():
    v = free_module(CatKind.FI, 1, W)
    assert v.decompose_degree(3) == {Partition((3,)): 1, Partition((2, 1)): 1}
    assert v.decompose_degree(1) == {Partition((1,)): 1}


def test_simple_at_is_torsion_spike():
    s = simple_at(Partition((2, 1)), W)
    assert s.dims == (0, 0, 0, 2, 0, 0)
    assert s.validate().ok
    t = simple_at_oi(2, W)
    assert t.dims == (0, 0, 1, 0, 0, 0)
    assert t.validate().ok


def test_direct_sum_dims_and_validation():
    a = free_module(CatKind.FI, 0, W)
    b = simple_at(Partition((1,)), W)
    s = direct_sum(a, b)
    assert s.dims == tuple(x + y for x, y in zip(a.dims, b.dims))
    assert s.validate().ok


def test_kernel_cokernel_of_augmentation():
    phi = augmentation_morphism(W)
    ker, incl = kernel_morphism(phi)
    assert ker.dims == tuple(max(0, n - 1) for n in range(W + 1))
    assert incl.validate().ok
    cok, proj = cokernel_morphism(incl)
    assert cok.dims == (0,) + (1,) * W
    assert proj.validate().ok


def test_zero_module_and_identity():
    z = zero_module(CatKind.OI, 3)
    assert z.dims == (0, 0, 0, 0)
    v = free_module(CatKind.FI, 1, 3)
    assert identity_morphism(v).is_isomorphism()


def test_generation_degree_scan():
    assert generation_degree_scan(free_module(CatKind.FI, 2, W)) == 2
    assert generation_degree_scan(simple_at(Partition((1,)), W)) == 1


def test_shift_of_projective():
    # Sigma P(0) = P(0); Sigma P(1) has degree-n dimension n+1
    p0 = free_module(CatKind.FI, 0, W)
    s0 = shift(p0)
    assert s0.validate().ok
    assert s0.dims == p0.dims[1:]
    p1 = free_module(CatKind.FI, 1, W)
    s1 = shift(p1)
    assert s1.validate().ok
    assert s1.dims == p1.dims[1:]


def test_morphism_space_matches_dense_oracle():
    cases = [
        (free_module(CatKind.FI, 1, 4), free_module(CatKind.FI, 1, 4)),
        (free_module(CatKind.FI, 1, 4), free_module(CatKind.FI, 0, 4)),
        (simple_at(Partition((1,)), 4), free_module(CatKind.FI, 1, 4)),
        (free_module(CatKind.OI, 1, 4), free_module(CatKind.OI, 1, 4)),
        (free_module(CatKind.OI, 2, 4), free_module(CatKind.OI, 1, 4)),
    ]
    from sheafrep.linalgq import span_of_vectors

    for v, w in cases:
        fast = module_morphism_space(v, w)
        dense = module_morphism_space_dense(v, w)
        assert len(fast) == len(dense)
        for phi in fast:
            assert phi.validate().ok

        def flat(phis):
            vecs = [
                [x for c in p.comps for row in c.data for x in row] for p in phis
            ]
            dim = sum(a * b for a, b in zip(v.dims, w.dims))
            return span_of_vectors(vecs, dim)

        if fast:
            assert flat(fast) == flat(dense)


def test_hom_from_free_module_has_representable_dimension():
    # Hom(P(m), V) = V_m
    for m in range(3):
        p = free_module(CatKind.FI, m, 4)
        v = free_module(CatKind.FI, 1, 4)
        assert len(module_morphism_space(p, v)) == v.dims[m]


def test_find_isomorphism_on_shuffled_sum():
    a = direct_sum(free_module(CatKind.FI, 0, 4), simple_at(Partition((1,)), 4))
    b = direct_sum(simple_at(Partition((1,)), 4), free_module(CatKind.FI, 0, 4))
    iso = find_isomorphism(a, b, trials=20)
    assert iso is not None
    assert iso.is_isomorphism() and iso.validate().ok


def test_find_isomorphism_rejects_nonisomorphic():
    a = free_module(CatKind.FI, 0, 4)
    b = simple_at(Partition(()), 4)
    assert a.dims != b.dims
    assert find_isomorphism(a, b, trials=5) is None


def test_corpus_validates():
    for name, v in build_corpus(6).items():
        rep = v.validate()
        assert rep.ok, (name, rep.message)
