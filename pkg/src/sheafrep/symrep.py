"""Exact representation theory of symmetric groups over Q.

Characters via the Murnaghan-Nakayama rule, Young's seminormal form for
the irreducible matrices (rational entries), Young symmetrizers, and
character-theoretic isotypic decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Mapping, Sequence

from gmpy2 import mpq

from .combinat import Partition, hook_dimension, partitions_of, standard_tableaux
from .linalgq import QONE, QZERO, RationalMatrix


# -- permutation words ----------------------------------------------------------


def perm_compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """(a o b)(i) = a(b(i)); permutations as 1-based image tuples."""
    return tuple(a[b[i] - 1] for i in range(len(b)))


def perm_inverse(a: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(a)
    for i, v in enumerate(a):
        inv[v - 1] = i + 1
    return tuple(inv)


def adjacent_word(perm: tuple[int, ...]) -> list[int]:
    """Write perm as a product s_{w[0]} ... s_{w[-1]} of adjacent swaps.

    s_i swaps i and i+1 (1-based).  The word composes left to right as
    functions: perm = s_{w[0]} o s_{w[1]} o ... o s_{w[-1]}.
    """
    word: list[int] = []
    cur = list(perm)
    # Bubble sort cur back to the identity; each swap of positions i,i+1
    # corresponds to multiplying by s_i on the right of the remainder.
    n = len(cur)
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            if cur[i] > cur[i + 1]:
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                word.append(i + 1)
                changed = True
    # perm o (s_{w[k]} ... s_{w[0]}) = id, so perm = s_{w[0]}^{-1}... but each
    # s is an involution, hence perm = s_{w[0]} ... reversed order below.
    word.reverse()
    return word


def perm_sign(perm: tuple[int, ...]) -> int:
    return -1 if len(adjacent_word(perm)) % 2 else 1


def cycle_type_of(perm: tuple[int, ...]) -> Partition:
    n = len(perm)
    seen = [False] * n
    lens = []
    for i in range(n):
        if not seen[i]:
            l = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j] - 1
                l += 1
            lens.append(l)
    return Partition(sorted(lens, reverse=True))


def class_representative(parts: Sequence[int]) -> tuple[int, ...]:
    """Permutation with the given cycle type, cycles on consecutive blocks."""
    img = []
    start = 1
    for l in parts:
        block = list(range(start, start + l))
        img.extend(block[1:] + block[:1])
        start += l
    return tuple(img)


# -- conjugacy classes ------------------------------------------------------


@dataclass(frozen=True)
class CycleType:
    """Conjugacy class of S_n given by its cycle lengths."""

    parts: Partition

    @property
    def n(self) -> int:
        return self.parts.size

    @property
    def class_size(self) -> int:
        mult: dict[int, int] = {}
        for p in self.parts:
            mult[p] = mult.get(p, 0) + 1
        denom = 1
        for length, m in mult.items():
            denom *= length**m * factorial(m)
        return factorial(self.n) // denom

    def representative(self) -> tuple[int, ...]:
        return class_representative(self.parts.parts)


def cycle_types(n: int) -> tuple[CycleType, ...]:
    return tuple(CycleType(p) for p in partitions_of(n))


# -- Murnaghan-Nakayama -----------------------------------------------------


@lru_cache(maxsize=None)
def _mn(lam_parts: tuple[int, ...], mu_parts: tuple[int, ...]) -> int:
    if not mu_parts:
        return 1
    k = mu_parts[0]
    rest = mu_parts[1:]
    total = 0
    for new_shape, height in _border_strip_removals(lam_parts, k):
        total += (-1) ** height * _mn(new_shape, rest)
    return total


def _border_strip_removals(lam_parts: tuple[int, ...], k: int):
    """All shapes obtained by removing a border strip of size k, with heights."""
    lam = list(lam_parts)
    rows = len(lam)
    out = []
    for start in range(rows):
        for end in range(start, rows):
            # Candidate removal spanning rows start..end: resulting rows are
            # mu[i] = lam[i+1] - 1 for start <= i < end, mu[end] chosen so the
            # total removed equals k; rows outside unchanged.
            new = lam[:]
            for i in range(start, end):
                new[i] = lam[i + 1] - 1
            removed_above = sum(lam[i] - new[i] for i in range(start, end))
            rem = k - removed_above
            if rem <= 0:
                continue
            new_end = lam[end] - rem
            lower = lam[end + 1] if end + 1 < rows else 0
            if new_end < lower:
                continue
            if end > start and new_end > new[end - 1]:
                continue
            if start > 0 and new[start] > lam[start - 1]:
                continue
            new[end] = new_end
            # Validity: new must be weakly decreasing and the removed cells
            # must form a connected rim hook; the construction guarantees
            # connectivity exactly when each intermediate row loses >= 1 cell,
            # already enforced by rem > 0 and the mu[i] = lam[i+1]-1 choice.
            ok = all(new[i] >= new[i + 1] for i in range(rows - 1)) and all(
                x >= 0 for x in new
            )
            if not ok:
                continue
            if any(new[i] > lam[i] for i in range(rows)):
                continue
            # Row start must actually lose a cell.
            if new[start] == lam[start]:
                continue
            out.append((tuple(x for x in new if x), end - start))
    return out


def mn_character(lam: Partition, mu: CycleType | Partition) -> int:
    """Character of the irreducible S_n-module of shape lam at class mu."""
    mu_parts = mu.parts if isinstance(mu, CycleType) else mu
    if lam.size != mu_parts.size:
        raise ValueError(f"size mismatch: |{lam}| != |{mu_parts}|")
    return _mn(lam.parts, mu_parts.parts)


@lru_cache(maxsize=None)
def character_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Rows: shapes in reverse-lex order; columns: cycle types, same order."""
    if not 1 <= n <= 10:
        raise ValueError("character_table supports 1 <= n <= 10")
    shapes = partitions_of(n)
    classes = cycle_types(n)
    return tuple(
        tuple(mn_character(lam, mu) for mu in classes) for lam in shapes
    )


# -- seminormal form ----------------------------------------------------------


@dataclass(frozen=True)
class IrrepMatrices:
    """Seminormal-form generator matrices for the irreducible of given shape."""

    shape: Partition
    generators: tuple[RationalMatrix, ...]

    @property
    def dim(self) -> int:
        return hook_dimension(self.shape)


def _tableau_positions(t) -> dict[int, tuple[int, int]]:
    return {v: (i, j) for i, row in enumerate(t) for j, v in enumerate(row)}


@lru_cache(maxsize=None)
def irrep_matrices(lam: Partition) -> IrrepMatrices:
    """Young seminormal form: exact rational matrices for s_1 .. s_{n-1}."""
    n = lam.size
    if n < 1:
        raise ValueError("need |lam| >= 1")
    tabs = standard_tableaux(lam)
    index = {t: i for i, t in enumerate(tabs)}
    dim = len(tabs)
    gens = []
    for k in range(1, n):  # s_k swaps k, k+1
        m = RationalMatrix.zeros(dim, dim)
        for t, col in index.items():
            pos = _tableau_positions(t)
            (r1, c1), (r2, c2) = pos[k], pos[k + 1]
            d = (c2 - r2) - (c1 - r1)  # axial distance
            inv_d = mpq(1, d)
            m.data[col][col] = inv_d
            if abs(d) > 1:
                swapped = tuple(
                    tuple(k + 1 if v == k else k if v == k + 1 else v for v in row)
                    for row in t
                )
                other = index[swapped]
                # Seminormal convention: rho(s_k) e_T = (1/d) e_T + e_{s_k T}
                # when d(T) > 0, with the complementary (1 - 1/d^2)
                # coefficient on the other side of the pair.
                m.data[other][col] = QONE if d > 0 else QONE - inv_d * inv_d
        gens.append(m)
    return IrrepMatrices(lam, tuple(gens))


def rep_matrix(gens: Sequence[RationalMatrix], perm: tuple[int, ...], dim: int) -> RationalMatrix:
    """rho(perm) as the product of generator matrices along an adjacent word."""
    m = RationalMatrix.identity(dim)
    for i in adjacent_word(perm):
        m = m @ gens[i - 1]
    return m


def rep_apply_row(gens: Sequence[RationalMatrix], perm: tuple[int, ...], row: Sequence) -> list:
    """Row vector times rho(perm), multiplying letter by letter."""
    out = list(row)
    for i in adjacent_word(perm):
        out = gens[i - 1].apply_row(out)
    return out


# -- group algebra -------------------------------------------------------------


@dataclass(frozen=True)
class GroupAlgebraElement:
    """Element of Q[S_n]; permutations stored as 1-based image tuples."""

    n: int
    terms: Mapping[tuple[int, ...], mpq]

    def __post_init__(self):
        object.__setattr__(
            self, "terms", {p: mpq(c) for p, c in self.terms.items() if c != 0}
        )

    def __mul__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if self.n != other.n:
            raise ValueError("degree mismatch")
        out: dict[tuple[int, ...], mpq] = {}
        for p, c in self.terms.items():
            for q, d in other.terms.items():
                r = perm_compose(p, q)
                out[r] = out.get(r, QZERO) + c * d
        return GroupAlgebraElement(self.n, out)

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if self.n != other.n:
            raise ValueError("degree mismatch")
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, QZERO) + c
        return GroupAlgebraElement(self.n, out)

    def scale(self, c) -> "GroupAlgebraElement":
        c = mpq(c)
        return GroupAlgebraElement(self.n, {p: c * v for p, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self.n == other.n and dict(self.terms) == dict(other.terms)


def all_permutations(n: int):
    from itertools import permutations

    return [tuple(p) for p in permutations(range(1, n + 1))]


def young_symmetrizer(lam: Partition) -> GroupAlgebraElement:
    """Idempotent e with Q[S_n] e isomorphic to the irreducible of shape lam."""
    n = lam.size
    if n < 1:
        raise ValueError("need |lam| >= 1")
    from itertools import permutations

    tab = standard_tableaux(lam)[0]
    rows = [list(r) for r in tab]
    cols: list[list[int]] = []
    for j in range(lam.parts[0]):
        cols.append([row[j] for row in rows if len(row) > j])

    def subgroup_perms(blocks: list[list[int]]):
        # All permutations of [n] preserving each block.
        perms = [tuple(range(1, n + 1))]
        for block in blocks:
            new_perms = []
            for base in perms:
                for imgs in permutations(block):
                    p = list(base)
                    for src, dst in zip(block, imgs):
                        p[src - 1] = base[dst - 1]
                    new_perms.append(tuple(p))
            perms = new_perms
        return perms

    row_sym = GroupAlgebraElement(n, {p: QONE for p in subgroup_perms(rows)})
    col_sym = GroupAlgebraElement(
        n, {p: mpq(perm_sign(p)) for p in subgroup_perms(cols)}
    )
    e = row_sym * col_sym
    return e.scale(mpq(hook_dimension(lam), factorial(n)))


def regular_action_matrix(elem: GroupAlgebraElement, side: str = "right") -> RationalMatrix:
    """Matrix of multiplication by ``elem`` on Q[S_n] in the permutation basis."""
    perms = all_permutations(elem.n)
    index = {p: i for i, p in enumerate(perms)}
    m = RationalMatrix.zeros(len(perms), len(perms))
    for j, g in enumerate(perms):
        for p, c in elem.terms.items():
            h = perm_compose(g, p) if side == "right" else perm_compose(p, g)
            m.data[index[h]][j] += c
    return m


# -- decomposition ----------------------------------------------------------------


def check_coxeter(gens: Sequence[RationalMatrix], dim: int) -> None:
    ident = RationalMatrix.identity(dim)
    for i, g in enumerate(gens):
        if g.rows != dim or g.cols != dim:
            raise ValueError(f"generator {i} has wrong shape")
        if g @ g != ident:
            raise ValueError(f"generator {i} does not square to the identity")
    for i in range(len(gens) - 1):
        a, b = gens[i], gens[i + 1]
        if a @ b @ a != b @ a @ b:
            raise ValueError(f"braid relation fails at ({i}, {i + 1})")
    for i in range(len(gens)):
        for j in range(i + 2, len(gens)):
            if gens[i] @ gens[j] != gens[j] @ gens[i]:
                raise ValueError(f"commuting relation fails at ({i}, {j})")


def character_of(gens: Sequence[RationalMatrix], dim: int, n: int) -> dict[Partition, mpq]:
    """Trace of a class representative per cycle type."""
    out = {}
    for ct in cycle_types(n):
        out[ct.parts] = rep_matrix(gens, ct.representative(), dim).trace()
    return out


def decompose_by_character(
    dim: int,
    gens: Sequence[RationalMatrix],
    n: int,
    character: Mapping[Partition, mpq] | None = None,
    check: bool = True,
) -> dict[Partition, int]:
    """Multiplicity of each irreducible via exact character inner products.

    ``character`` may supply precomputed traces per cycle type to skip the
    matrix products (used by modules that track characters of subspaces).
    """
    if dim == 0:
        return {}
    if n == 0:
        return {Partition(): dim}
    gens = list(gens)
    if len(gens) != n - 1:
        raise ValueError(f"expected {n - 1} generators, got {len(gens)}")
    if check:
        check_coxeter(gens, dim)
    if character is None:
        character = character_of(gens, dim, n)
    out: dict[Partition, int] = {}
    order = factorial(n)
    for lam in partitions_of(n):
        total = QZERO
        for ct in cycle_types(n):
            total += ct.class_size * mn_character(lam, ct) * character[ct.parts]
        mult = total / order
        if mult.denominator != 1:
            raise ValueError(f"non-integral multiplicity {mult} for {lam}")
        if mult:
            out[lam] = int(mult)
    return out


def group_rep_matrices(gens: Sequence[RationalMatrix], n: int, dim: int) -> dict[tuple[int, ...], RationalMatrix]:
    """rho(g) for every g in S_n, built by BFS over the Cayley graph."""
    reps = {tuple(range(1, n + 1)): RationalMatrix.identity(dim)}
    frontier = list(reps)
    while frontier:
        new_frontier = []
        for p in frontier:
            for i in range(1, n):
                q = perm_compose(s_perm(i, n), p)
                if q not in reps:
                    reps[q] = gens[i - 1] @ reps[p]
                    new_frontier.append(q)
        frontier = new_frontier
    return reps


def s_perm(i: int, n: int) -> tuple[int, ...]:
    p = list(range(1, n + 1))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def isotypic_projector(
    lam: Partition, dim: int, gens: Sequence[RationalMatrix], n: int
) -> RationalMatrix:
    """(f_lam / n!) * sum over g of chi_lam(g^{-1}) rho(g)."""
    if n > 6:
        raise ValueError("isotypic_projector supports n <= 6 (full group sum)")
    if dim == 0:
        return RationalMatrix.zeros(0, 0)
    check_coxeter(list(gens), dim)
    reps = group_rep_matrices(gens, n, dim)
    f = hook_dimension(lam)
    acc = RationalMatrix.zeros(dim, dim)
    chi_cache: dict[Partition, int] = {}
    for p, m in reps.items():
        ct = cycle_type_of(perm_inverse(p))
        if ct not in chi_cache:
            chi_cache[ct] = mn_character(lam, ct)
        c = chi_cache[ct]
        if c:
            acc = acc + m.scale(c)
    return acc.scale(mpq(f, factorial(n)))
