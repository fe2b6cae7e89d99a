"""Finite-support model of discrete representations of the infinite
symmetric group: slices of F(n), invariants under the stabilizers of [i],
the functor carrying such a representation to a truncated FI-module, and
the modules F(lambda), S(lambda).

A vector supported on injections into [M] is invariant under the stabilizer
of [i] (an infinite group) if and only if it is fixed by the finite
symmetric group on [M+1] minus [i]: one extra point beyond the support is
enough to displace any non-compliant term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations as _perms

from gmpy2 import mpq

from .combinat import Partition, hook_dimension, lambda_tilde
from .linalgq import (
    QONE,
    QZERO,
    RationalMatrix,
    RowReducer,
    Subspace,
    coordinates_in_rows,
    format_rational,
    kernel as nullspace,
    parse_rational,
    row_space,
)
from .modcore import TruncatedModule, recompute_bounds
from .skelcat import CatKind
from .symrep import isotypic_projector, young_symmetrizer


@dataclass
class FiniteSupportVector:
    """Finite linear combination of injections [n] -> [M]."""

    n: int
    M: int
    terms: dict[tuple[int, ...], mpq] = field(default_factory=dict)

    def __post_init__(self):
        for values, coef in list(self.terms.items()):
            if len(values) != self.n or len(set(values)) != self.n:
                raise ValueError(f"{values} is not an injection from [{self.n}]")
            if any(not 1 <= v <= self.M for v in values):
                raise ValueError(f"{values} exceeds the horizon [{self.M}]")
            if not coef:
                del self.terms[values]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "terms": [
                {"values": list(v), "coef": format_rational(c)}
                for v, c in sorted(self.terms.items())
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "FiniteSupportVector":
        return FiniteSupportVector(
            data["n"],
            data["M"],
            {
                tuple(t["values"]): parse_rational(t["coef"])
                for t in data["terms"]
            },
        )


@dataclass(frozen=True)
class OpenStabilizer:
    """The stabilizer of [i] inside the full symmetric group of the naturals."""

    i: int

    def __post_init__(self):
        if self.i < 0:
            raise ValueError("i must be nonnegative")


def _slice_basis(n: int, M: int) -> list[tuple[int, ...]]:
    return sorted(_perms(range(1, M + 1), n))


def _swap_values(values: tuple[int, ...], k: int) -> tuple[int, ...]:
    """Act by the transposition (k, k+1) on the values of an injection."""
    out = list(values)
    for idx, v in enumerate(out):
        if v == k:
            out[idx] = k + 1
        elif v == k + 1:
            out[idx] = k
    return tuple(out)


def invariants_F(n: int, i: int, M: int) -> Subspace:
    """Vectors of the [M]-slice of F(n) invariant under the stabilizer of [i].

    The group permutes the injection basis, so the fixed space of the
    extended slice is spanned by orbit sums; a fixed vector is supported in
    [M] exactly when its whole orbit avoids the displacement point M+1.
    """
    if M < max(i, n) + 1:
        raise ValueError("horizon too small: need M >= max(i, n) + 1")
    ext = _slice_basis(n, M + 1)
    index = {f: r for r, f in enumerate(ext)}
    parent = list(range(len(ext)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for k in range(i + 1, M + 1):
        for f, r in index.items():
            r2 = index[_swap_values(f, k)]
            ra, rb = find(r), find(r2)
            if ra != rb:
                parent[ra] = rb
    orbits: dict[int, list[tuple[int, ...]]] = {}
    for f, r in index.items():
        orbits.setdefault(find(r), []).append(f)
    basis_m = _slice_basis(n, M)
    pos = {f: r for r, f in enumerate(basis_m)}
    rows = []
    for members in orbits.values():
        if any(M + 1 in f for f in members):
            continue
        row = [QZERO] * len(basis_m)
        for f in members:
            row[pos[f]] = QONE
        rows.append(row)
    if not rows:
        return Subspace(len(basis_m), RationalMatrix.zeros(0, len(basis_m)))
    return row_space(RationalMatrix.from_rows(rows))


def _sparse_from_vector(v: FiniteSupportVector) -> dict[tuple[int, ...], mpq]:
    return dict(v.terms)


def _invariant_subvectors(
    rows: list[dict[tuple[int, ...], mpq]], n: int, i: int, M: int
) -> list[dict[tuple[int, ...], mpq]]:
    """Basis of the invariant vectors inside the span of `rows`."""
    nvars = len(rows)
    if nvars == 0:
        return []
    cons = RowReducer(nvars)
    eqs: dict[tuple[int, tuple[int, ...]], list[mpq]] = {}
    for k in range(i + 1, M + 1):
        for r, w in enumerate(rows):
            moved: dict[tuple[int, ...], mpq] = {}
            for f, c in w.items():
                g = _swap_values(f, k)
                moved[g] = moved.get(g, QZERO) + c
            for f, c in w.items():
                moved[f] = moved.get(f, QZERO) - c
            for f, c in moved.items():
                if c:
                    eqs.setdefault((k, f), [QZERO] * nvars)[r] = c
    for row in eqs.values():
        cons.add(row)
    sol = (
        nullspace(cons.basis_matrix())
        if cons.rank
        else Subspace(nvars, RationalMatrix.identity(nvars))
    )
    out = []
    for coeffs in sol.basis.data:
        vec: dict[tuple[int, ...], mpq] = {}
        for r, c in enumerate(coeffs):
            if c:
                for f, x in rows[r].items():
                    vec[f] = vec.get(f, QZERO) + c * x
        out.append({f: c for f, c in vec.items() if c})
    return out


def _reduce_family(
    vectors: list[FiniteSupportVector],
) -> tuple[list[dict[tuple[int, ...], mpq]], int, int]:
    """Row-reduce a generating family to an independent list of sparse rows."""
    n, M = vectors[0].n, vectors[0].M
    basis = _slice_basis(n, M)
    pos = {f: r for r, f in enumerate(basis)}
    red = RowReducer(len(basis))
    rows = []
    for v in vectors:
        dense = [QZERO] * len(basis)
        for f, c in v.terms.items():
            dense[pos[f]] = c
        if red.add(dense):
            rows.append(_sparse_from_vector(v))
    return rows, n, M


def phi_module(
    builder: int | list[FiniteSupportVector], window: int, M: int
) -> TruncatedModule:
    """The truncated FI-module of stabilizer invariants, degree by degree.

    `builder` is either an integer n (the full F(n)) or a generating family
    of finite-support vectors; degree i carries the invariants under the
    stabilizer of [i], transpositions act by value swaps, and the structure
    maps are the inclusions of fixed spaces.
    """
    if isinstance(builder, int):
        n = builder
        if M < window + n + 1:
            raise ValueError("horizon too small: need M >= window + n + 1")
        degree_vectors = []
        for i in range(window + 1):
            inv = invariants_F(n, i, M)
            basis = _slice_basis(n, M)
            vecs = []
            for row in inv.basis.data:
                vecs.append({f: c for f, c in zip(basis, row) if c})
            degree_vectors.append(vecs)
        family_n, family_M = n, M
    else:
        rows, family_n, family_M = _reduce_family(builder)
        if family_M < window + family_n + 1:
            raise ValueError("horizon too small: need M >= window + n + 1")
        degree_vectors = [
            _invariant_subvectors(rows, family_n, i, family_M)
            for i in range(window + 1)
        ]
    return _module_from_invariants(degree_vectors, window, family_M)


def _module_from_invariants(
    degree_vectors: list[list[dict[tuple[int, ...], mpq]]], window: int, M: int
) -> TruncatedModule:
    dims = [len(vs) for vs in degree_vectors]
    keysets = [
        sorted({f for v in vs for f in v}) for vs in degree_vectors
    ]

    def dense_rows(i: int) -> RationalMatrix:
        keys = keysets[i]
        pos = {f: r for r, f in enumerate(keys)}
        m = RationalMatrix.zeros(dims[i], max(len(keys), 1))
        for r, v in enumerate(degree_vectors[i]):
            for f, c in v.items():
                m.data[r][pos[f]] = c
        return m

    def coords_in(i: int, vecs: list[dict]) -> RationalMatrix:
        basis = dense_rows(i)
        keys = keysets[i]
        pos = {f: r for r, f in enumerate(keys)}
        out = RationalMatrix.zeros(dims[i], len(vecs))
        for j, v in enumerate(vecs):
            dense = [QZERO] * max(len(keys), 1)
            for f, c in v.items():
                if f not in pos:
                    raise ValueError("vector leaves the invariant span")
                dense[pos[f]] = c
            coords = coordinates_in_rows(basis, dense)
            if coords is None:
                raise ValueError("vector leaves the invariant span")
            for r, c in enumerate(coords):
                out.data[r][j] = c
        return out

    gens = {}
    for i in range(2, window + 1):
        mats = []
        for k in range(1, i):
            moved = []
            for v in degree_vectors[i]:
                w: dict[tuple[int, ...], mpq] = {}
                for f, c in v.items():
                    g = _swap_values(f, k)
                    w[g] = w.get(g, QZERO) + c
                moved.append(w)
            mats.append(coords_in(i, moved))
        gens[i] = mats
    maps = {}
    for i in range(window):
        maps[i] = coords_in(i + 1, degree_vectors[i])
    out = TruncatedModule(CatKind.FI, window, dims, gens, maps)
    recompute_bounds(out)
    return out


def build_F_lambda(lam: Partition, M: int) -> list[FiniteSupportVector]:
    """Generating family of the [M]-slice of F(lambda) = F(n) e_lambda."""
    n = lam.size
    if n > M:
        raise ValueError("horizon too small: need |lambda| <= M")
    if n == 0:
        return [FiniteSupportVector(0, M, {(): QONE})]
    e = young_symmetrizer(lam)
    out = []
    for f in _slice_basis(n, M):
        terms: dict[tuple[int, ...], mpq] = {}
        for sigma, c in e.terms.items():
            g = tuple(f[sigma[j] - 1] for j in range(n))
            terms[g] = terms.get(g, QZERO) + c
        out.append(FiniteSupportVector(n, M, terms))
    return out


def _epsilon_tilde(lam: Partition, seed_index: int = 0) -> FiniteSupportVector:
    """A nonzero element of the unique L_{lambda-tilde} summand of
    RC([n],[m]) e_lambda, m = |lambda| + lambda_1."""
    n = lam.size
    m = n + lam.parts[0]
    tl = lambda_tilde(lam)
    basis = _slice_basis(n, m)
    pos = {f: r for r, f in enumerate(basis)}
    dim = len(basis)
    gens = []
    for k in range(1, m):
        g = RationalMatrix.zeros(dim, dim)
        for f, r in pos.items():
            g.data[pos[_swap_values(f, k)]][r] = QONE
        gens.append(g)
    proj = isotypic_projector(tl, dim, gens, m)
    e = young_symmetrizer(lam)
    seeds = []
    for f in basis:
        terms: dict[tuple[int, ...], mpq] = {}
        for sigma, c in e.terms.items():
            g = tuple(f[sigma[j] - 1] for j in range(n))
            terms[g] = terms.get(g, QZERO) + c
        dense = [QZERO] * dim
        for g, c in terms.items():
            dense[pos[g]] = c
        seeds.append(dense)
    tried = 0
    for s in range(seed_index, len(seeds)):
        vec = proj.apply(seeds[s])
        if any(vec):
            return FiniteSupportVector(
                n, m, {f: c for f, c in zip(basis, vec) if c}
            )
        tried += 1
    raise ValueError("projector vanishes on every seed")


def build_S_lambda(lam: Partition, M: int) -> list[FiniteSupportVector]:
    """Generating family of the [M]-slice of S(lambda) = F(m) epsilon,
    with different seeds verified to span the same slice."""
    n = lam.size
    m = n + lam.parts[0]
    if m > M:
        raise ValueError("horizon too small: need |lambda| + lambda_1 <= M")
    if n == 0:
        return [FiniteSupportVector(0, M, {(): QONE})]
    eps = _epsilon_tilde(lam)
    fam = _family_from_epsilon(eps, M)
    eps2 = _epsilon_tilde(lam, seed_index=1)
    fam2 = _family_from_epsilon(eps2, M)
    if _family_span(fam) != _family_span(fam2):
        raise ValueError("two seeds produced different slices")
    return fam


def _family_from_epsilon(
    eps: FiniteSupportVector, M: int
) -> list[FiniteSupportVector]:
    n, m = eps.n, eps.M
    out = []
    for g in _slice_basis(m, M):
        terms: dict[tuple[int, ...], mpq] = {}
        for h, c in eps.terms.items():
            comp = tuple(g[v - 1] for v in h)
            terms[comp] = terms.get(comp, QZERO) + c
        out.append(FiniteSupportVector(n, M, terms))
    return out


def _family_span(vectors: list[FiniteSupportVector]) -> Subspace:
    n, M = vectors[0].n, vectors[0].M
    basis = _slice_basis(n, M)
    pos = {f: r for r, f in enumerate(basis)}
    rows = []
    for v in vectors:
        dense = [QZERO] * len(basis)
        for f, c in v.terms.items():
            dense[pos[f]] = c
        rows.append(dense)
    from .linalgq import span_of_vectors

    return span_of_vectors(rows, len(basis))
