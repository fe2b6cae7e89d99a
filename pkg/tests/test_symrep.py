import math

from gmpy2 import mpq

from sheafrep.combinat import Partition, hook_dimension, partitions_of
from sheafrep.linalgq import RationalMatrix
from sheafrep.symrep import (
    CycleType,
    all_permutations,
    adjacent_word,
    character_table,
    check_coxeter,
    cycle_type_of,
    cycle_types,
    irrep_matrices,
    isotypic_projector,
    mn_character,
    perm_compose,
    perm_inverse,
    perm_sign,
    rep_matrix,
    young_symmetrizer,
)


def test_character_table_orthogonality():
    for n in range(1, 6):
        cts = cycle_types(n)
        table = [[mn_character(lam, ct) for ct in cts] for lam in partitions_of(n)]
        order = math.factorial(n)
        for a, row_a in enumerate(table):
            for b, row_b in enumerate(table):
                inner = sum(
                    ct.class_size * x * y for ct, x, y in zip(cts, row_a, row_b)
                )
                assert inner == (order if a == b else 0)


def test_class_sizes_sum_to_group_order():
    for n in range(1, 7):
        assert sum(ct.class_size for ct in cycle_types(n)) == math.factorial(n)


def test_mn_dimension_column():
    for n in range(1, 7):
        identity = Partition((1,) * n)
        for lam in partitions_of(n):
            assert mn_character(lam, identity) == hook_dimension(lam)


def test_irrep_matrices_satisfy_coxeter_and_characters():
    for n in range(2, 6):
        for lam in partitions_of(n):
            rep = irrep_matrices(lam)
            assert rep.dim == hook_dimension(lam)
            check_coxeter(rep.generators, rep.dim)
            for ct in cycle_types(n):
                m = rep_matrix(rep.generators, ct.representative(), rep.dim)
                trace = sum(m.data[i][i] for i in range(rep.dim))
                assert trace == mn_character(lam, ct)


def test_perm_utilities():
    for perm in all_permutations(4):
        assert perm_compose(perm, perm_inverse(perm)) == (1, 2, 3, 4)
        word = adjacent_word(perm)
        assert perm_sign(perm) == (-1) ** len(word)
        assert cycle_type_of(perm).size == 4


def test_character_table_matches_mn():
    for n in range(1, 6):
        table = character_table(n)
        cts = cycle_types(n)
        lams = partitions_of(n)
        for i, lam in enumerate(lams):
            for j, ct in enumerate(cts):
                assert table[i][j] == mn_character(lam, ct)


def test_young_symmetrizer_idempotent():
    for lam in [Partition((2,)), Partition((1, 1)), Partition((2, 1)), Partition((3, 1))]:
        e = young_symmetrizer(lam)
        assert e * e == e


def test_isotypic_projector_idempotent_and_rank():
    # regular representation of S_3: isotypic ranks are dim^2
    n = 3
    perms = list(all_permutations(n))
    index = {p: i for i, p in enumerate(perms)}
    dim = len(perms)
    gens = []
    for k in range(1, n):
        m = RationalMatrix.zeros(dim, dim)
        s = tuple(range(1, n + 1))
        s = s[: k - 1] + (s[k], s[k - 1]) + s[k + 1 :]
        for p, i in index.items():
            q = perm_compose(s, p)
            m.data[index[q]][i] = mpq(1)
        gens.append(m)
    for lam in partitions_of(n):
        proj = isotypic_projector(lam, dim, gens, n)
        assert proj @ proj == proj
        trace = sum(proj.data[i][i] for i in range(dim))
        assert trace == hook_dimension(lam) ** 2


def test_cycle_type_representative_round_trip():
    for n in range(1, 7):
        for ct in cycle_types(n):
            assert cycle_type_of(ct.representative()) == ct.parts
