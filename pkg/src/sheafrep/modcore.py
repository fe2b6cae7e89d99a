"""Truncated FI/OI-modules over the rationals.

A module is recorded by its degreewise dimensions, the adjacent-transposition
matrices of the symmetric-group action per degree (FI only), and the
structure maps between consecutive degrees: a single standard-inclusion
matrix per degree for FI, or the full family of coface matrices for OI.
Every other morphism acts through the canonical factorization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from gmpy2 import mpq

from .combinat import Partition, hook_dimension
from .linalgq import (
    QONE,
    QZERO,
    RationalMatrix,
    RowReducer,
    Subspace,
    coordinates_in_rows,
    kernel as nullspace,
    rref,
    solve,
)
from .skelcat import CatKind, Injection, canonical_factorization, compose, coface, hom_set, standard_inclusion
from .symrep import (
    check_coxeter,
    decompose_by_character,
    irrep_matrices,
    perm_compose,
    rep_matrix,
)


@dataclass
class ValidationReport:
    ok: bool
    message: str = "ok"


class TruncatedModule:
    """Functor on FI or OI restricted to degrees 0..window, over Q.

    fi_gens[n] (FI, n >= 2): matrices of the adjacent transpositions
    s_1..s_{n-1} on degree n.  maps[n] (FI): the standard-inclusion matrix
    degree n -> n+1.  maps[n] (OI): the list [A_{n,1}, ..., A_{n,n+1}] of
    coface matrices degree n -> n+1.
    """

    def __init__(
        self,
        kind: CatKind,
        window: int,
        dims: Sequence[int],
        fi_gens: Optional[dict] = None,
        maps: Optional[dict] = None,
        bounds: Optional[tuple[int, int]] = None,
        bounds_warning: bool = False,
        support: Optional[int] = None,
    ):
        if window < 0 or window > 10:
            raise ValueError("window must lie in 0..10")
        if len(dims) != window + 1:
            raise ValueError("dims must have length window + 1")
        self.kind = CatKind(kind)
        self.window = window
        self.dims = tuple(int(d) for d in dims)
        self.fi_gens = fi_gens if fi_gens is not None else {}
        self.maps = maps if maps is not None else {}
        self.bounds = bounds
        self.bounds_warning = bounds_warning
        self.support = support
        self.char_cache: dict[int, dict] = {}

    # -- accessors ---------------------------------------------------------

    def gens_at(self, n: int) -> list[RationalMatrix]:
        if self.kind != CatKind.FI:
            raise ValueError("group generators exist only for FI modules")
        if n < 2:
            return []
        return list(self.fi_gens.get(n, []))

    def iota(self, n: int) -> RationalMatrix:
        if self.kind != CatKind.FI:
            raise ValueError("single inclusion maps exist only for FI modules")
        return self.maps[n]

    def coface_matrix(self, n: int, i: int) -> RationalMatrix:
        if self.kind != CatKind.OI:
            raise ValueError("coface matrices exist only for OI modules")
        return self.maps[n][i - 1]

    def act_perm(self, n: int, perm: tuple[int, ...]) -> RationalMatrix:
        return rep_matrix(self.gens_at(n), perm, self.dims[n])

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims)

    def top_support(self) -> int:
        for n in range(self.window, -1, -1):
            if self.dims[n]:
                return n
        return -1

    # -- morphism action ----------------------------------------------------

    def morphism_matrix(self, f: Injection) -> RationalMatrix:
        if f.n > self.window:
            raise ValueError("morphism target exceeds window")
        m = RationalMatrix.identity(self.dims[f.m])
        if self.kind == CatKind.FI:
            sigma, k = canonical_factorization(CatKind.FI, f)
            for n in range(f.m, f.m + k):
                m = self.iota(n) @ m
            if f.n >= 2:
                m = self.act_perm(f.n, sigma.values) @ m
            return m
        chain, _ = canonical_factorization(CatKind.OI, f)
        for c in reversed(chain):
            i = next(v for v in range(1, c.n + 1) if v not in set(c.values))
            m = self.coface_matrix(c.m, i) @ m
        return m

    def act(self, f: Injection, v: Sequence) -> list[mpq]:
        return self.morphism_matrix(f).apply(v)

    def evaluate_degree(self, x: int) -> dict:
        if not 0 <= x <= self.window:
            raise ValueError("degree out of window")
        return {
            "degree": x,
            "dimension": self.dims[x],
            "kind": self.kind.value,
            "basis_size": self.dims[x],
        }

    # -- validation ----------------------------------------------------------

    def validate(self, check_bounds: bool = True) -> ValidationReport:
        N = self.window
        try:
            if self.kind == CatKind.FI:
                for n in range(2, N + 1):
                    gens = self.gens_at(n)
                    if len(gens) != n - 1:
                        return ValidationReport(False, f"degree {n}: expected {n - 1} generators")
                    try:
                        check_coxeter(gens, self.dims[n])
                    except ValueError as e:
                        return ValidationReport(False, f"degree {n}: {e}")
                for n in range(N):
                    m = self.iota(n)
                    if m.rows != self.dims[n + 1] or m.cols != self.dims[n]:
                        return ValidationReport(False, f"inclusion {n}->{n + 1}: wrong shape")
                    for k in range(1, n):
                        left = m @ self.act_perm(n, _s(k, n))
                        right = self.act_perm(n + 1, _s(k, n + 1)) @ m
                        if left != right:
                            return ValidationReport(
                                False, f"equivariance fails at degree {n}, generator {k}"
                            )
                for n in range(N - 1):
                    two = self.iota(n + 1) @ self.iota(n)
                    tw = self.act_perm(n + 2, _s(n + 1, n + 2)) @ two
                    if tw != two:
                        return ValidationReport(False, f"coherence fails at degree {n}")
            else:
                for n in range(N):
                    mats = self.maps[n]
                    if len(mats) != n + 1:
                        return ValidationReport(False, f"degree {n}: expected {n + 1} cofaces")
                    for a in mats:
                        if a.rows != self.dims[n + 1] or a.cols != self.dims[n]:
                            return ValidationReport(False, f"coface at degree {n}: wrong shape")
                for n in range(N - 1):
                    for j in range(2, n + 3):
                        for i in range(1, j):
                            left = self.coface_matrix(n + 1, j) @ self.coface_matrix(n, i)
                            right = self.coface_matrix(n + 1, i) @ self.coface_matrix(n, j - 1)
                            if left != right:
                                return ValidationReport(
                                    False, f"coface identity fails at degree {n}, (i,j)=({i},{j})"
                                )
        except KeyError as e:
            return ValidationReport(False, f"missing structure data: {e}")
        if check_bounds and self.bounds is not None:
            g = self.bounds[0]
            for n in range(g + 1, N + 1):
                if not self._degree_generated_from_below(n):
                    return ValidationReport(False, f"degree {n} not generated below bound {g}")
        return ValidationReport(True)

    def _degree_generated_from_below(self, n: int) -> bool:
        if self.dims[n] == 0:
            return True
        if n == 0:
            return False
        span = self._span_from_below(n)
        return span.rank == self.dims[n]

    def _span_from_below(self, n: int) -> RowReducer:
        """Row reducer holding the structure-map image of degree n-1, closed
        under the group action in the FI case."""
        red = RowReducer(self.dims[n])
        if self.kind == CatKind.FI:
            cols = [self.iota(n - 1).col(j) for j in range(self.dims[n - 1])]
            _close_under(red, cols, self.gens_at(n))
        else:
            for a in self.maps[n - 1]:
                for j in range(self.dims[n - 1]):
                    red.add(a.col(j))
        return red

    # -- degreewise decomposition -------------------------------------------

    def decompose_degree(self, n: int) -> dict[Partition, int]:
        if self.kind != CatKind.FI:
            raise ValueError("degreewise decomposition applies to FI modules")
        if not 0 <= n <= self.window:
            raise ValueError("degree out of window")
        if self.dims[n] == 0:
            return {}
        if n == 0:
            return {Partition(()): self.dims[0]}
        if n == 1:
            return {Partition((1,)): self.dims[1]}
        return decompose_by_character(
            self.dims[n], self.gens_at(n), n,
            character=self.char_cache.get(n), check=False,
        )


def _s(k: int, n: int) -> tuple[int, ...]:
    p = list(range(1, n + 1))
    p[k - 1], p[k] = p[k], p[k - 1]
    return tuple(p)


def _close_under(red: RowReducer, seeds: list, gens: Sequence[RationalMatrix]) -> list:
    """Add seeds to red and close under the matrices; returns the vectors
    actually added, in insertion order."""
    added = []
    queue = []
    for v in seeds:
        if red.add(v):
            added.append(v)
            queue.append(v)
    while queue:
        v = queue.pop()
        for g in gens:
            w = g.apply(v)
            if red.add(w):
                added.append(w)
                queue.append(w)
    return added


# -- constructors -----------------------------------------------------------


def zero_module(kind: CatKind, window: int) -> TruncatedModule:
    dims = [0] * (window + 1)
    if kind == CatKind.FI:
        gens = {n: [RationalMatrix.zeros(0, 0)] * (n - 1) for n in range(2, window + 1)}
        maps = {n: RationalMatrix.zeros(0, 0) for n in range(window)}
    else:
        gens = None
        maps = {n: [RationalMatrix.zeros(0, 0)] * (n + 1) for n in range(window)}
    return TruncatedModule(kind, window, dims, gens, maps, bounds=(0, 0), support=0)


def free_module(kind: CatKind, m: int, window: int) -> TruncatedModule:
    """The representable P(m): degree n has basis hom_set(kind, m, n)."""
    if m > window:
        raise ValueError("m must not exceed the window")
    bases = [hom_set(kind, m, n) for n in range(window + 1)]
    index = [{f: i for i, f in enumerate(b)} for b in bases]
    dims = [len(b) for b in bases]
    if kind == CatKind.FI:
        gens: dict = {}
        for n in range(2, window + 1):
            mats = []
            for k in range(1, n):
                mat = RationalMatrix.zeros(dims[n], dims[n])
                sk = Injection(n, n, _s(k, n))
                for j, f in enumerate(bases[n]):
                    mat.data[index[n][compose(sk, f)]][j] = QONE
                mats.append(mat)
            gens[n] = mats
        maps = {}
        for n in range(window):
            mat = RationalMatrix.zeros(dims[n + 1], dims[n])
            for j, f in enumerate(bases[n]):
                g = Injection(m, n + 1, f.values)
                mat.data[index[n + 1][g]][j] = QONE
            maps[n] = mat
        return TruncatedModule(kind, window, dims, gens, maps, bounds=(m, m))
    maps = {}
    for n in range(window):
        mats = []
        for i in range(1, n + 2):
            c = coface(n, i)
            mat = RationalMatrix.zeros(dims[n + 1], dims[n])
            for j, f in enumerate(bases[n]):
                mat.data[index[n + 1][compose(c, f)]][j] = QONE
            mats.append(mat)
        maps[n] = mats
    return TruncatedModule(kind, window, dims, None, maps, bounds=(m, m))


def _subset_embedding(s: tuple[int, ...]) -> dict[int, int]:
    """Order embedding [len(s)] -> S for a sorted tuple S."""
    return {k + 1: v for k, v in enumerate(s)}


def induced_projective(lam: Partition, window: int) -> TruncatedModule:
    """P(lambda): degree n is spanned by (|lambda|-subset of [n]) x (basis of
    the irreducible of shape lambda), with dimension C(n,m) * f^lambda."""
    from itertools import combinations

    m = lam.size
    if m > window:
        raise ValueError("|lambda| must not exceed the window")
    if m == 0:
        return free_module(CatKind.FI, 0, window)
    irr = irrep_matrices(lam)
    f = irr.dim
    subsets = [list(combinations(range(1, n + 1), m)) for n in range(window + 1)]
    sub_index = [{s: i for i, s in enumerate(ss)} for ss in subsets]
    dims = [len(ss) * f for ss in subsets]
    perm_mats: dict[tuple[int, ...], RationalMatrix] = {}

    def irr_mat(pi: tuple[int, ...]) -> RationalMatrix:
        if pi not in perm_mats:
            perm_mats[pi] = rep_matrix(irr.generators, pi, f)
        return perm_mats[pi]

    gens: dict = {}
    for n in range(2, window + 1):
        mats = []
        for k in range(1, n):
            mat = RationalMatrix.zeros(dims[n], dims[n])
            swap = {k: k + 1, k + 1: k}
            for si, s in enumerate(subsets[n]):
                s2 = tuple(sorted(swap.get(x, x) for x in s))
                # pi = f_{s2}^{-1} o s_k o f_s in S_m
                emb = _subset_embedding(s)
                inv2 = {v: kk for kk, v in _subset_embedding(s2).items()}
                pi = tuple(inv2[swap.get(emb[a], emb[a])] for a in range(1, m + 1))
                block = irr_mat(pi)
                r0, c0 = sub_index[n][s2] * f, si * f
                for a in range(f):
                    for b in range(f):
                        if block.data[a][b]:
                            mat.data[r0 + a][c0 + b] = block.data[a][b]
            mats.append(mat)
        gens[n] = mats
    maps = {}
    for n in range(window):
        mat = RationalMatrix.zeros(dims[n + 1], dims[n])
        for si, s in enumerate(subsets[n]):
            r0, c0 = sub_index[n + 1][s] * f, si * f
            for a in range(f):
                mat.data[r0 + a][c0 + a] = QONE
        maps[n] = mat
    return TruncatedModule(CatKind.FI, window, dims, gens, maps, bounds=(m, m))


def simple_at(lam: Partition, window: int) -> TruncatedModule:
    """Torsion simple concentrated at degree |lambda|, of shape lambda."""
    m = lam.size
    if m > window:
        raise ValueError("|lambda| must not exceed the window")
    dims = [0] * (window + 1)
    f = hook_dimension(lam) if m else 1
    dims[m] = f
    gens = {}
    for n in range(2, window + 1):
        d = dims[n]
        if n == m:
            gens[n] = list(irrep_matrices(lam).generators)
        else:
            gens[n] = [RationalMatrix.zeros(d, d)] * (n - 1)
    maps = {n: RationalMatrix.zeros(dims[n + 1], dims[n]) for n in range(window)}
    return TruncatedModule(
        CatKind.FI, window, dims, gens, maps,
        bounds=(m, min(m + 1, window)), support=m,
    )


def simple_at_oi(m: int, window: int) -> TruncatedModule:
    if m > window:
        raise ValueError("m must not exceed the window")
    dims = [0] * (window + 1)
    dims[m] = 1
    maps = {
        n: [RationalMatrix.zeros(dims[n + 1], dims[n])] * (n + 1) for n in range(window)
    }
    return TruncatedModule(
        CatKind.OI, window, dims, None, maps,
        bounds=(m, min(m + 1, window)), support=m,
    )


def direct_sum(v: TruncatedModule, w: TruncatedModule) -> TruncatedModule:
    if v.kind != w.kind or v.window != w.window:
        raise ValueError("summands must share kind and window")
    dims = [a + b for a, b in zip(v.dims, w.dims)]
    if v.kind == CatKind.FI:
        gens = {
            n: [
                RationalMatrix.block_diag([a, b])
                for a, b in zip(v.gens_at(n), w.gens_at(n))
            ]
            for n in range(2, v.window + 1)
        }
        maps = {
            n: RationalMatrix.block_diag([v.iota(n), w.iota(n)]) for n in range(v.window)
        }
    else:
        gens = None
        maps = {
            n: [
                RationalMatrix.block_diag([a, b]) for a, b in zip(v.maps[n], w.maps[n])
            ]
            for n in range(v.window)
        }
    bounds = None
    if v.bounds and w.bounds:
        bounds = (max(v.bounds[0], w.bounds[0]), max(v.bounds[1], w.bounds[1]))
    support = None
    if v.support is not None and w.support is not None:
        support = max(v.support, w.support)
    return TruncatedModule(v.kind, v.window, dims, gens, maps, bounds, support=support)


# -- morphisms ---------------------------------------------------------------


@dataclass
class ModuleMorphism:
    source: TruncatedModule
    target: TruncatedModule
    comps: list[RationalMatrix]

    def __post_init__(self):
        if self.source.kind != self.target.kind or self.source.window != self.target.window:
            raise ValueError("morphism endpoints must share kind and window")
        if len(self.comps) != self.source.window + 1:
            raise ValueError("one component per degree required")

    def validate(self) -> ValidationReport:
        v, w = self.source, self.target
        for n in range(v.window + 1):
            c = self.comps[n]
            if c.rows != w.dims[n] or c.cols != v.dims[n]:
                return ValidationReport(False, f"component {n}: wrong shape")
        if v.kind == CatKind.FI:
            for n in range(2, v.window + 1):
                for k, (gv, gw) in enumerate(zip(v.gens_at(n), w.gens_at(n)), start=1):
                    if self.comps[n] @ gv != gw @ self.comps[n]:
                        return ValidationReport(
                            False, f"fails to commute with generator {k} at degree {n}"
                        )
            for n in range(v.window):
                if self.comps[n + 1] @ v.iota(n) != w.iota(n) @ self.comps[n]:
                    return ValidationReport(False, f"fails to commute with inclusion at {n}")
        else:
            for n in range(v.window):
                for i in range(1, n + 2):
                    if self.comps[n + 1] @ v.coface_matrix(n, i) != w.coface_matrix(n, i) @ self.comps[n]:
                        return ValidationReport(False, f"fails to commute with coface ({n},{i})")
        return ValidationReport(True)

    def is_isomorphism(self) -> bool:
        for n in range(self.source.window + 1):
            c = self.comps[n]
            if c.rows != c.cols:
                return False
            _, pivots = rref(c)
            if len(pivots) != c.rows:
                return False
        return True

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)


def identity_morphism(v: TruncatedModule) -> ModuleMorphism:
    return ModuleMorphism(v, v, [RationalMatrix.identity(d) for d in v.dims])


def compose_morphisms(g: ModuleMorphism, f: ModuleMorphism) -> ModuleMorphism:
    if g.source is not f.target and g.source.dims != f.target.dims:
        raise ValueError("composition mismatch")
    return ModuleMorphism(f.source, g.target, [a @ b for a, b in zip(g.comps, f.comps)])


def _restrict(mat: RationalMatrix, src: Subspace, dst: Subspace) -> RationalMatrix:
    """Matrix of mat on chosen row bases: mat . src_i = sum_j out[j,i] dst_j."""
    if src.dim == 0:
        return RationalMatrix.zeros(dst.dim, 0)
    rhs = mat @ src.basis.transpose()
    out = solve(dst.basis.transpose(), rhs)
    if out is None:
        raise ValueError("subspace is not preserved by the matrix")
    return out


def submodule(v: TruncatedModule, spaces: Sequence[Subspace]):
    """Submodule on the given degreewise subspaces, with its inclusion.

    Each subspace must be preserved by all generator and structure maps.
    Bounds are recomputed from scratch on the result.
    """
    N = v.window
    dims = [sp.dim for sp in spaces]
    if v.kind == CatKind.FI:
        gens = {
            n: [_restrict(g, spaces[n], spaces[n]) for g in v.gens_at(n)]
            for n in range(2, N + 1)
        }
        maps = {n: _restrict(v.iota(n), spaces[n], spaces[n + 1]) for n in range(N)}
        sub = TruncatedModule(v.kind, N, dims, gens, maps)
    else:
        maps = {
            n: [_restrict(a, spaces[n], spaces[n + 1]) for a in v.maps[n]]
            for n in range(N)
        }
        sub = TruncatedModule(v.kind, N, dims, None, maps)
    incl = ModuleMorphism(sub, v, [sp.basis.transpose() for sp in spaces])
    recompute_bounds(sub)
    return sub, incl


def quotient(v: TruncatedModule, spaces: Sequence[Subspace]):
    """Quotient by degreewise invariant subspaces, with its projection.

    Quotient coordinates are the non-pivot coordinates of the subspace's
    reduced row basis, so the construction is canonical.
    """
    N = v.window
    projs, lifts, dims = [], [], []
    for n in range(N + 1):
        basis = spaces[n].basis  # RREF rows
        pivots = [next(j for j, x in enumerate(row) if x) for row in basis.data]
        free = [j for j in range(v.dims[n]) if j not in pivots]
        q = len(free)
        p = RationalMatrix.zeros(q, v.dims[n])
        for a, fcol in enumerate(free):
            p.data[a][fcol] = QONE
            for i, pc in enumerate(pivots):
                p.data[a][pc] = -basis.data[i][fcol]
        lift = RationalMatrix.zeros(v.dims[n], q)
        for a, fcol in enumerate(free):
            lift.data[fcol][a] = QONE
        projs.append(p)
        lifts.append(lift)
        dims.append(q)
    if v.kind == CatKind.FI:
        gens = {
            n: [projs[n] @ g @ lifts[n] for g in v.gens_at(n)] for n in range(2, N + 1)
        }
        maps = {n: projs[n + 1] @ v.iota(n) @ lifts[n] for n in range(N)}
        quo = TruncatedModule(v.kind, N, dims, gens, maps)
    else:
        maps = {
            n: [projs[n + 1] @ a @ lifts[n] for a in v.maps[n]] for n in range(N)
        }
        quo = TruncatedModule(v.kind, N, dims, None, maps)
    proj = ModuleMorphism(v, quo, projs)
    recompute_bounds(quo)
    return quo, proj


def kernel_morphism(phi: ModuleMorphism):
    """Kernel as a submodule of the source, with its inclusion."""
    spaces = [nullspace(c) for c in phi.comps]
    return submodule(phi.source, spaces)


def cokernel_morphism(phi: ModuleMorphism):
    """Cokernel as a quotient of the target, with its projection."""
    from .linalgq import row_space

    spaces = [row_space(c.transpose()) for c in phi.comps]
    return quotient(phi.target, spaces)


def is_separated(v: TruncatedModule) -> bool:
    """True iff every structure map on the window is injective."""
    for n in range(v.window):
        mats = [v.iota(n)] if v.kind == CatKind.FI else list(v.maps[n])
        for m in mats:
            if nullspace(m).dim:
                return False
    return True


def generation_degree_scan(v: TruncatedModule) -> int:
    """Largest degree not spanned by the structure-map images from below."""
    t0 = 0
    for n in range(v.window + 1):
        if v.dims[n] and (n == 0 or not v._degree_generated_from_below(n)):
            t0 = n
    return t0


def recompute_bounds(v: TruncatedModule) -> None:
    """Set bounds after a kernel/cokernel/submodule construction.

    The relation bound is twice the generation degree when the result is
    torsion free; otherwise it falls back to the window with a warning flag.
    """
    g = generation_degree_scan(v)
    if is_separated(v):
        v.bounds = (g, min(2 * g, v.window))
        v.bounds_warning = False
    else:
        v.bounds = (g, v.window)
        v.bounds_warning = True


# -- shift functor -------------------------------------------------------------


def shift(v: TruncatedModule) -> TruncatedModule:
    """Shift: degree n of the result is degree n+1 of the input.

    FI: the group acts through the permutations fixing the last letter, and
    the structure map is the action of the injection [n+1] -> [n+2] that
    fixes [n] and sends the added point to the new top.
    """
    if v.window < 1:
        raise ValueError("cannot shift an empty window")
    N = v.window - 1
    dims = list(v.dims[1:])
    if v.kind == CatKind.FI:
        gens = {n: v.gens_at(n + 1)[: n - 1] for n in range(2, N + 1)}
        maps = {}
        for n in range(N):
            m = v.iota(n + 1)
            if n + 2 >= 2:
                m = v.act_perm(n + 2, _s(n + 1, n + 2)) @ m
            maps[n] = m
        out = TruncatedModule(v.kind, N, dims, gens, maps)
    else:
        maps = {n: list(v.maps[n + 1][: n + 1]) for n in range(N)}
        out = TruncatedModule(v.kind, N, dims, None, maps)
    if v.support is not None:
        out.support = max(v.support - 1, 0)
    recompute_bounds(out)
    return out


def shift_morphism(phi: ModuleMorphism) -> ModuleMorphism:
    return ModuleMorphism(shift(phi.source), shift(phi.target), list(phi.comps[1:]))


# -- morphism spaces -------------------------------------------------------------


class _LinearColumns:
    """Columns of a degree component as linear functions of the unknowns.

    column j is a (target_dim x nvars) matrix L_j; the numeric column for an
    unknown vector x is L_j @ x.
    """

    def __init__(self, columns: list[RationalMatrix]):
        self.columns = columns

    def numeric(self, x: list[mpq], rows: int) -> RationalMatrix:
        out = RationalMatrix.zeros(rows, len(self.columns))
        for j, l in enumerate(self.columns):
            col = l.apply(x)
            for i in range(rows):
                out.data[i][j] = col[i]
        return out


def _sparse_row_apply(mat: RationalMatrix, sym: RationalMatrix) -> RationalMatrix:
    """mat @ sym, exploiting row sparsity of mat (sym is a symbolic block)."""
    out = RationalMatrix.zeros(mat.rows, sym.cols)
    for i, row in enumerate(mat.data):
        acc = out.data[i]
        for k, c in enumerate(row):
            if c:
                srow = sym.data[k]
                for j, x in enumerate(srow):
                    if x:
                        acc[j] += c * x
    return out


def module_morphism_space(v: TruncatedModule, w: TruncatedModule) -> list[ModuleMorphism]:
    """Basis of the space of morphisms v -> w on the window.

    The unknowns are the components on degrees up to the generation degree
    of v.  Equivariance and chain conditions among those degrees are imposed
    first and the unknowns reparameterized onto their solution space, so the
    upward propagation (structure maps plus group closure for FI) only
    carries a handful of symbolic columns; consistency constraints appear
    whenever a vector is reachable along two paths.
    """
    if v.kind != w.kind or v.window != w.window:
        raise ValueError("endpoints must share kind and window")
    N = v.window
    g = v.bounds[0] if v.bounds else generation_degree_scan(v)
    g = min(g, N)
    slot = {}
    nvars = 0
    for n in range(g + 1):
        slot[n] = nvars
        nvars += v.dims[n] * w.dims[n]
    if nvars == 0:
        return []

    def unknown_columns(n: int) -> list[RationalMatrix]:
        cols = []
        for j in range(v.dims[n]):
            l = RationalMatrix.zeros(w.dims[n], nvars)
            for i in range(w.dims[n]):
                l.data[i][slot[n] + i * v.dims[n] + j] = QONE
            cols.append(l)
        return cols

    sym: list[list[RationalMatrix]] = [unknown_columns(n) for n in range(g + 1)]
    low = RowReducer(nvars)

    def add_equal(red: RowReducer, a: RationalMatrix, b: RationalMatrix):
        diff = a - b
        for row in diff.data:
            if any(row):
                red.add(row)

    def combine(vals: list[RationalMatrix], coeffs, shape) -> RationalMatrix:
        out = RationalMatrix.zeros(*shape)
        for c, l in zip(coeffs, vals):
            if c:
                for i, row in enumerate(l.data):
                    orow = out.data[i]
                    for j, x in enumerate(row):
                        if x:
                            orow[j] += c * x
        return out

    for n in range(g + 1):
        if v.kind == CatKind.FI:
            for gv, gw in zip(v.gens_at(n), w.gens_at(n)):
                for j in range(v.dims[n]):
                    lhs = _sparse_row_apply(gw, sym[n][j])
                    rhs = combine(sym[n], gv.col(j), (w.dims[n], nvars))
                    add_equal(low, lhs, rhs)
    for n in range(g):
        pairs = (
            [(v.iota(n), w.iota(n))]
            if v.kind == CatKind.FI
            else list(zip(v.maps[n], w.maps[n]))
        )
        for mv, mw in pairs:
            for j in range(v.dims[n]):
                rhs = _sparse_row_apply(mw, sym[n][j])
                lhs = combine(sym[n + 1], mv.col(j), (w.dims[n + 1], nvars))
                add_equal(low, lhs, rhs)

    base = (
        nullspace(low.basis_matrix()).basis
        if low.rank
        else RationalMatrix.identity(nvars)
    )
    k = base.rows
    if k == 0:
        return []
    bt = base.transpose()
    sym = [[col @ bt for col in cols] for cols in sym]
    constraints = RowReducer(k)

    # propagate upward; consistency constraints when a vector re-enters the span
    for n in range(g, N):
        red = RowReducer(v.dims[n + 1])
        basis_vecs: list[list[mpq]] = []
        basis_vals: list[RationalMatrix] = []
        queue: list[tuple[list[mpq], RationalMatrix]] = []
        bmat_red: list[list[mpq]] = []

        def account(vec, val):
            if red.add(vec):
                basis_vecs.append(vec)
                basis_vals.append(val)
                queue.append((vec, val))
            else:
                coords = coordinates_in_rows(
                    RationalMatrix.from_rows(basis_vecs), vec
                )
                expected = combine(basis_vals, coords, (w.dims[n + 1], k))
                add_equal(constraints, val, expected)

        src_pairs = (
            [(v.iota(n), w.iota(n))]
            if v.kind == CatKind.FI
            else list(zip(v.maps[n], w.maps[n]))
        )
        for av, aw in src_pairs:
            for j in range(v.dims[n]):
                account(av.col(j), _sparse_row_apply(aw, sym[n][j]))
        if v.kind == CatKind.FI:
            while queue:
                vec, val = queue.pop()
                for gv, gw in zip(v.gens_at(n + 1), w.gens_at(n + 1)):
                    vec2 = gv.apply(vec)
                    account(vec2, _sparse_row_apply(gw, val))
        if red.rank != v.dims[n + 1]:
            raise ValueError(
                f"source is not generated in degrees <= {g}; degree {n + 1} not spanned"
            )
        cols = []
        ident = RationalMatrix.identity(v.dims[n + 1])
        bmat = RationalMatrix.from_rows(basis_vecs)
        for j in range(v.dims[n + 1]):
            coords = coordinates_in_rows(bmat, ident.col(j))
            cols.append(combine(basis_vals, coords, (w.dims[n + 1], k)))
        sym.append(cols)

    sol = nullspace(constraints.basis_matrix()) if constraints.rank else Subspace(
        k, RationalMatrix.identity(k)
    )
    out = []
    for x in sol.basis.data:
        comps = []
        for n in range(N + 1):
            m = RationalMatrix.zeros(w.dims[n], v.dims[n])
            for j, col in enumerate(sym[n]):
                vals = col.apply(list(x))
                for i in range(w.dims[n]):
                    m.data[i][j] = vals[i]
            comps.append(m)
        out.append(ModuleMorphism(v, w, comps))
    return out


def module_morphism_space_dense(v: TruncatedModule, w: TruncatedModule) -> list[ModuleMorphism]:
    """Reference implementation: one dense linear system over all degrees."""
    if v.kind != w.kind or v.window != w.window:
        raise ValueError("endpoints must share kind and window")
    N = v.window
    slot, nvars = {}, 0
    for n in range(N + 1):
        slot[n] = nvars
        nvars += v.dims[n] * w.dims[n]
    if nvars == 0:
        return []
    constraints = RowReducer(nvars)

    def var(n, i, j):
        return slot[n] + i * v.dims[n] + j

    def add_pair(n_src, n_dst, mv, mw):
        # phi_{dst} @ mv == mw @ phi_{src}
        for i in range(w.dims[n_dst]):
            for j in range(v.dims[n_src]):
                row = [QZERO] * nvars
                for k in range(v.dims[n_dst]):
                    if mv.data[k][j]:
                        row[var(n_dst, i, k)] += mv.data[k][j]
                for k in range(w.dims[n_src]):
                    if mw.data[i][k]:
                        row[var(n_src, k, j)] -= mw.data[i][k]
                if any(row):
                    constraints.add(row)

    for n in range(2, N + 1):
        if v.kind == CatKind.FI:
            for gv, gw in zip(v.gens_at(n), w.gens_at(n)):
                add_pair(n, n, gv, gw)
    for n in range(N):
        pairs = (
            [(v.iota(n), w.iota(n))]
            if v.kind == CatKind.FI
            else list(zip(v.maps[n], w.maps[n]))
        )
        for mv, mw in pairs:
            add_pair(n, n + 1, mv, mw)

    sol = nullspace(constraints.basis_matrix()) if constraints.rank else Subspace(
        nvars, RationalMatrix.identity(nvars)
    )
    out = []
    for x in sol.basis.data:
        comps = []
        for n in range(N + 1):
            m = RationalMatrix.zeros(w.dims[n], v.dims[n])
            for i in range(w.dims[n]):
                for j in range(v.dims[n]):
                    m.data[i][j] = x[var(n, i, j)]
            comps.append(m)
        out.append(ModuleMorphism(v, w, comps))
    return out


def find_isomorphism(
    v: TruncatedModule, w: TruncatedModule, trials: int = 60, seed: int = 0
) -> Optional[ModuleMorphism]:
    """An explicit isomorphism V -> W, or None.

    Basis elements of the morphism space are tried first, then random
    combinations; a candidate is only materialized in full once it is
    invertible at a probe degree, so failures stay cheap.
    """
    import random

    if v.dims != w.dims:
        return None
    if not any(v.dims):
        return ModuleMorphism(
            v, w, [RationalMatrix.zeros(0, 0) for _ in range(v.window + 1)]
        )
    homs = module_morphism_space(v, w)
    if not homs:
        return None
    for h in homs:
        if h.is_isomorphism():
            return h
    probe = next(n for n in range(v.window + 1) if v.dims[n])
    rng = random.Random(seed)
    for _ in range(trials):
        coefs = [mpq(rng.randint(-5, 5)) for _ in homs]
        at_probe = RationalMatrix.zeros(w.dims[probe], v.dims[probe])
        for h, c in zip(homs, coefs):
            if c:
                at_probe = at_probe + h.comps[probe].scale(c)
        if solve(at_probe, RationalMatrix.identity(at_probe.rows)) is None:
            continue
        comps = []
        for d in range(v.window + 1):
            m = RationalMatrix.zeros(w.dims[d], v.dims[d])
            for h, c in zip(homs, coefs):
                if c:
                    m = m + h.comps[d].scale(c)
            comps.append(m)
        cand = ModuleMorphism(v, w, comps)
        if cand.is_isomorphism():
            return cand
    return None
