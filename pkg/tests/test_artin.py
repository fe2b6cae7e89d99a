import math

import pytest
from gmpy2 import mpq

from sheafrep.artin import (
    FiniteSupportVector,
    OpenStabilizer,
    build_F_lambda,
    build_S_lambda,
    invariants_F,
    phi_module,
)
from sheafrep.combinat import Partition
from sheafrep.modcore import find_isomorphism, free_module, induced_projective
from sheafrep.nakayama import simple_saturated
from sheafrep.skelcat import CatKind


def test_invariant_dimensions():
    # fixed vectors under the stabilizer of [i] biject with injections into [i]
    for n in range(3):
        for i in range(5):
            m = max(i, n) + 1
            expected = math.factorial(i) // math.factorial(i - n) if i >= n else 0
            assert invariants_F(n, i, m).dim == expected, (n, i)


def test_invariants_stable_in_horizon():
    for n in range(3):
        for i in range(4):
            base = max(i, n) + 1
            dims = {invariants_F(n, i, m).dim for m in range(base, base + 3)}
            assert len(dims) == 1


def test_invariants_horizon_too_small():
    with pytest.raises(ValueError):
        invariants_F(2, 3, 3)


def test_phi_of_free_is_projective():
    for n in range(3):
        window = 4
        v = phi_module(n, window, window + n + 1)
        p = free_module(CatKind.FI, n, window)
        assert v.dims == p.dims
        iso = find_isomorphism(v, p)
        assert iso is not None and iso.is_isomorphism()


def test_phi_of_f_lambda_is_induced_projective():
    lam = Partition((1, 1))
    window = 4
    m = window + lam.size + 1
    fam = build_F_lambda(lam, m)
    v = phi_module(fam, window, m)
    p = induced_projective(lam, window)
    assert v.dims == p.dims
    iso = find_isomorphism(v, p)
    assert iso is not None and iso.is_isomorphism()


def test_phi_of_s_lambda_is_saturated_simple():
    lam = Partition((1,))
    window = 5
    m = window + lam.size + lam.parts[0] + 1
    fam = build_S_lambda(lam, m)
    v = phi_module(fam, window, m)
    l1 = simple_saturated(lam, window)
    assert v.dims == l1.dims
    for n in range(window + 1):
        if v.dims[n]:
            assert v.decompose_degree(n) == l1.decompose_degree(n)


def test_s_lambda_inside_f_lambda():
    # each S(λ) generator lies in the span of the F(λ) family at the same slice
    from sheafrep.artin import _family_span, _slice_basis

    lam = Partition((1,))
    m = 5
    f_fam = build_F_lambda(lam, m)
    s_fam = build_S_lambda(lam, m)
    span = _family_span(f_fam)
    basis = _slice_basis(s_fam[0].n, m)
    pos = {f: r for r, f in enumerate(basis)}
    for vec in s_fam:
        dense = [mpq(0)] * len(basis)
        for f, c in vec.terms.items():
            dense[pos[f]] = c
        assert span.contains_vector(dense)


def test_finite_support_vector_json_round_trip():
    v = FiniteSupportVector(1, 3, {(2,): mpq(1, 2), (3,): mpq(-1, 2)})
    assert FiniteSupportVector.from_json(v.to_json()) == v


def test_finite_support_vector_validation():
    with pytest.raises(ValueError):
        FiniteSupportVector(2, 3, {(1, 1): mpq(1)})
    with pytest.raises(ValueError):
        FiniteSupportVector(1, 2, {(3,): mpq(1)})
    with pytest.raises(ValueError):
        OpenStabilizer(-1)


def test_trivial_invariants():
    # n = 0: the empty injection is fixed by everything
    for i in range(4):
        assert invariants_F(0, i, max(i, 0) + 1).dim == 1
    # n = 2, i = 1: no injections [2] -> [1]
    assert invariants_F(2, 1, 3).dim == 0
