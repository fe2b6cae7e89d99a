"""Nakayama pipeline: nu, its inverse, sheafification, saturation tests,
simple saturated modules, sheaf composition factors, presentation bounds.

nu(V) takes degreewise duals of Hom(V, P(x)); its inverse solves for natural
families into the representables.  Sheafification is the composite, with the
unit evaluating a vector against every morphism to a projective.

Hom(V, P(x)) for FI is solved in Frobenius coordinates: an equivariant
morphism component V_n -> P(x)_n is determined by the single functional
theta_n(v) = (coefficient of the standard inclusion in phi_n(v)), which must
be invariant under the permutations fixing [x], compatible with the
structure maps, and vanish on the part of degree n+1 coming from injections
that hit the new point.  This keeps every linear solve at the size of V
instead of the size of V tensor P(x).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from gmpy2 import mpq

from .combinat import Partition, hook_dimension, pad_uniform, partitions_of
from .linalgq import (
    QONE,
    QZERO,
    RationalMatrix,
    RowReducer,
    Subspace,
    invariant_subspace,
    kernel as nullspace,
    row_space,
    solve,
    span_of_vectors,
)
from .skelcat import CatKind, Injection, canonical_factorization, hom_set
from .symrep import (
    adjacent_word,
    cycle_types,
    decompose_by_character,
    irrep_matrices,
    mn_character,
    perm_inverse,
    rep_apply_row,
)
from .modcore import (
    ModuleMorphism,
    TruncatedModule,
    _close_under,
    _s,
    free_module,
    induced_projective,
    generation_degree_scan,
    direct_sum,
    is_separated,
    kernel_morphism,
    module_morphism_space,
    recompute_bounds,
    simple_at_oi,
    submodule,
    zero_module,
)


@dataclass
class PresentationBounds:
    gen_degree: int
    rel_degree: int

    @property
    def presentation_degree(self) -> int:
        return max(self.gen_degree, self.rel_degree)


# ---------------------------------------------------------------------------
# Hom(V, P(x))
# ---------------------------------------------------------------------------


class _FiHomBasis:
    """Basis of Hom(V, P(x)) for FI, in theta coordinates.

    Each element is stored as {degree n: row of length dims[n]} for n >= x;
    the coefficient of g in phi_n(v) is theta_n(rho(sigma_g)^{-1} v).
    """

    def __init__(self, v: TruncatedModule, x: int, thetas: list[dict[int, list[mpq]]]):
        self.module = v
        self.x = x
        self.thetas = thetas

    @property
    def dim(self) -> int:
        return len(self.thetas)

    def concat(self, theta: dict[int, list[mpq]]) -> list[mpq]:
        out: list[mpq] = []
        for n in range(self.x, self.module.window + 1):
            out.extend(theta.get(n, [QZERO] * self.module.dims[n]))
        return out

    def coordinates(self, theta: dict[int, list[mpq]]) -> list[mpq]:
        basis = RationalMatrix.from_rows([self.concat(t) for t in self.thetas])
        sol = solve(basis.transpose(), RationalMatrix.column(self.concat(theta)))
        if sol is None:
            raise ValueError("transformed functional left the morphism space")
        return [sol.data[i][0] for i in range(basis.rows)]


def _row_times_perm(v: TruncatedModule, n: int, row: Sequence, perm: tuple[int, ...]) -> list[mpq]:
    """row @ rho_n(perm), multiplying generator by generator."""
    gens = v.gens_at(n)
    return rep_apply_row(gens, perm, row)


def _transposition(j: int, t: int, n: int) -> tuple[int, ...]:
    p = list(range(1, n + 1))
    p[j - 1], p[t - 1] = p[t - 1], p[j - 1]
    return tuple(p)


def fi_hom_spaces(v: TruncatedModule) -> dict[int, _FiHomBasis]:
    """Hom(V, P(x)) for all x up to the generation degree of V."""
    if v.kind != CatKind.FI:
        raise ValueError("theta coordinates apply to FI modules")
    if v.bounds is None:
        raise ValueError("bounds are required")
    N = v.window
    g = min(v.bounds[0], N)
    # span vectors rho(t_{j,n}) iota V_{n-1}, shared between the x-solves
    tvecs: dict[tuple[int, int], list[list[mpq]]] = {}

    def tvec(j: int, n: int) -> list[list[mpq]]:
        if (j, n) not in tvecs:
            base = [v.iota(n - 1).col(c) for c in range(v.dims[n - 1])]
            if j == n:
                tvecs[(j, n)] = base
            else:
                perm = _transposition(j, n, n)
                out = []
                gens = v.gens_at(n)
                word = adjacent_word(perm)
                for vec in base:
                    cur = vec
                    for i in reversed(word):
                        cur = gens[i - 1].apply(cur)
                    out.append(cur)
                tvecs[(j, n)] = out
        return tvecs[(j, n)]

    spaces = {}
    for x in range(g + 1):
        slot = {}
        nvars = 0
        for n in range(x, N + 1):
            slot[n] = nvars
            nvars += v.dims[n]
        if nvars == 0:
            spaces[x] = _FiHomBasis(v, x, [])
            continue
        cons = RowReducer(nvars)

        def add_block_row(n: int, vec: Sequence, extra: Optional[tuple[int, int, mpq]] = None):
            row = [QZERO] * nvars
            for i, val in enumerate(vec):
                row[slot[n] + i] = val
            if extra is not None:
                en, ei, ev = extra
                row[slot[en] + ei] += ev
            if any(row):
                cons.add(row)

        for n in range(x, N + 1):
            gens = v.gens_at(n)
            for k in range(x + 1, n):
                gk = gens[k - 1]
                for c in range(v.dims[n]):
                    col = gk.col(c)
                    col[c] -= QONE
                    add_block_row(n, col)
        for n in range(x, N):
            iota = v.iota(n)
            for c in range(v.dims[n]):
                add_block_row(n + 1, iota.col(c), extra=(n, c, mpq(-1)))
        for n1 in range(max(x, 1), N + 1):
            for j in range(1, min(x, n1) + 1):
                for vec in tvec(j, n1):
                    add_block_row(n1, vec)

        sol = nullspace(cons.basis_matrix()) if cons.rank else Subspace(
            nvars, RationalMatrix.identity(nvars)
        )
        thetas = []
        for row in sol.basis.data:
            theta = {}
            for n in range(x, N + 1):
                if v.dims[n]:
                    theta[n] = list(row[slot[n] : slot[n] + v.dims[n]])
            thetas.append(theta)
        spaces[x] = _FiHomBasis(v, x, thetas)
    return spaces


def oi_hom_spaces(v: TruncatedModule) -> dict[int, list[ModuleMorphism]]:
    if v.bounds is None:
        raise ValueError("bounds are required")
    g = min(v.bounds[0], v.window)
    return {
        x: module_morphism_space(v, free_module(CatKind.OI, x, v.window))
        for x in range(g + 1)
    }


def hom_to_projective(v: TruncatedModule, x: int) -> list[ModuleMorphism]:
    """All morphisms V -> P(x) on the window, as explicit matrices.

    The FI computation runs in theta coordinates and materializes the
    components afterwards; intended for modest windows.
    """
    if v.bounds is None:
        raise ValueError("bounds are required")
    if x > v.bounds[0]:
        return []
    if v.kind == CatKind.OI:
        return module_morphism_space(v, free_module(CatKind.OI, x, v.window))
    basis = fi_hom_spaces(v)[x]
    p = free_module(CatKind.FI, x, v.window)
    out = []
    for theta in basis.thetas:
        comps = []
        for n in range(v.window + 1):
            mat = RationalMatrix.zeros(p.dims[n], v.dims[n])
            if n >= x and v.dims[n]:
                rows = _coset_rows(v, n, x, theta[n], order_preserving_only=False)
                for r_idx, row in enumerate(rows):
                    mat.data[r_idx] = row
            comps.append(mat)
        out.append(ModuleMorphism(v, p, comps))
    return out


def _coset_rows(
    v: TruncatedModule, n: int, x: int, theta_row: Sequence, order_preserving_only: bool
) -> list[list[mpq]]:
    """Rows theta_n o rho(sigma_g^{-1}) for g in hom(x, n), in hom-set order.

    With order_preserving_only, only the rows at the order-preserving
    injections are produced (still in their hom_set order).
    """
    kind_list = hom_set(CatKind.OI if order_preserving_only else CatKind.FI, x, n)
    gens = v.gens_at(n)
    rows = []
    for gmor in kind_list:
        sigma, _ = canonical_factorization(CatKind.FI, Injection(x, n, gmor.values))
        w = perm_inverse(sigma.values)
        rows.append(rep_apply_row(gens, w, list(theta_row)))
    return rows


# ---------------------------------------------------------------------------
# nu
# ---------------------------------------------------------------------------


def _fd_fi_module(window: int, dims: list[int], gens_by_degree: dict, maps_by_degree: dict,
                  support: int) -> TruncatedModule:
    gens = {}
    for n in range(2, window + 1):
        gens[n] = gens_by_degree.get(n, [RationalMatrix.zeros(dims[n], dims[n])] * (n - 1))
    maps = {}
    for n in range(window):
        maps[n] = maps_by_degree.get(n, RationalMatrix.zeros(dims[n + 1], dims[n]))
    out = TruncatedModule(CatKind.FI, window, dims, gens, maps,
                          bounds=(support, window), bounds_warning=True, support=support)
    return out


def _nu_fi(v: TruncatedModule):
    homs = fi_hom_spaces(v)
    N = v.window
    g = max(homs)
    dims = [homs[x].dim if x in homs else 0 for x in range(N + 1)]
    gens_by_degree: dict = {}
    maps_by_degree: dict = {}
    for x in range(2, N + 1):
        if x not in homs or homs[x].dim == 0:
            continue
        basis = homs[x]
        mats = []
        for k in range(1, x):
            # T_{s_k}: theta'_n = theta_n @ rho_n(s_k); transpose for the dual
            cols = []
            for theta in basis.thetas:
                theta2 = {
                    n: _row_times_perm(v, n, row, _s(k, n)) for n, row in theta.items()
                }
                cols.append(basis.coordinates(theta2))
            t_mat = RationalMatrix.zeros(basis.dim, basis.dim)
            for j, col in enumerate(cols):
                for i, val in enumerate(col):
                    t_mat.data[i][j] = val
            mats.append(t_mat.transpose())
        gens_by_degree[x] = mats
    for x in range(N):
        src, dst = homs.get(x), homs.get(x + 1)
        if src is None or dst is None or src.dim == 0 or dst.dim == 0:
            continue
        # precomposition by the standard inclusion, H_{x+1} -> H_x
        cols = []
        for theta in dst.thetas:
            theta2: dict[int, list[mpq]] = {}
            for n in range(x, v.window + 1):
                if v.dims[n] == 0:
                    continue
                acc = [QZERO] * v.dims[n]
                if n >= x + 1:
                    for t in range(x + 1, n + 1):
                        h = Injection(x + 1, n, tuple(range(1, x + 1)) + (t,))
                        sigma, _ = canonical_factorization(CatKind.FI, h)
                        row = rep_apply_row(
                            v.gens_at(n), perm_inverse(sigma.values), list(theta[n])
                        )
                        acc = [a + b for a, b in zip(acc, row)]
                theta2[n] = acc
            cols.append(src.coordinates(theta2))
        pi = RationalMatrix.zeros(src.dim, dst.dim)
        for j, col in enumerate(cols):
            for i, val in enumerate(col):
                pi.data[i][j] = val
        maps_by_degree[x] = pi.transpose()
    support = max((x for x in range(N + 1) if dims[x]), default=0)
    return _fd_fi_module(N, dims, gens_by_degree, maps_by_degree, support), homs


def _nu_oi(v: TruncatedModule):
    homs = oi_hom_spaces(v)
    N = v.window
    dims = [len(homs.get(x, [])) for x in range(N + 1)]
    projs = {x: free_module(CatKind.OI, x, N) for x in homs}

    def concat(phi: ModuleMorphism) -> list[mpq]:
        out = []
        for c in phi.comps:
            for r in c.data:
                out.extend(r)
        return out

    def coords(basis_list: list[ModuleMorphism], phi_comps: list[RationalMatrix]) -> list[mpq]:
        mat = RationalMatrix.from_rows([concat(b) for b in basis_list])
        flat = []
        for c in phi_comps:
            for r in c.data:
                flat.extend(r)
        sol = solve(mat.transpose(), RationalMatrix.column(flat))
        if sol is None:
            raise ValueError("precomposition left the morphism space")
        return [sol.data[i][0] for i in range(mat.rows)]

    maps_by_degree: dict = {}
    for x in range(N):
        src, dst = homs.get(x, []), homs.get(x + 1, [])
        if not src or not dst:
            maps_by_degree[x] = [
                RationalMatrix.zeros(dims[x + 1], dims[x])
            ] * (x + 1)
            continue
        px, px1 = projs[x], projs[x + 1]
        mats = []
        for i in range(1, x + 2):
            # T_{alpha_{x,i}}: P(x+1) -> P(x), h -> h o alpha_{x,i}
            prec = {}
            for n in range(N + 1):
                basis_src = hom_set(CatKind.OI, x + 1, n)
                basis_dst = hom_set(CatKind.OI, x, n)
                idx = {f: r for r, f in enumerate(basis_dst)}
                from .skelcat import coface, compose
                al = coface(x, i)
                m = RationalMatrix.zeros(px.dims[n], px1.dims[n])
                for cidx, h in enumerate(basis_src):
                    m.data[idx[compose(h, al)]][cidx] = QONE
                prec[n] = m
            cols = []
            for phi in dst:
                new_comps = [prec[n] @ phi.comps[n] for n in range(N + 1)]
                cols.append(coords(src, new_comps))
            t_mat = RationalMatrix.zeros(len(src), len(dst))
            for j, col in enumerate(cols):
                for r, val in enumerate(col):
                    t_mat.data[r][j] = val
            mats.append(t_mat.transpose())
        maps_by_degree[x] = mats
    maps = {
        n: maps_by_degree.get(
            n, [RationalMatrix.zeros(dims[n + 1], dims[n])] * (n + 1)
        )
        for n in range(N)
    }
    support = max((x for x in range(N + 1) if dims[x]), default=0)
    out = TruncatedModule(CatKind.OI, N, dims, None, maps,
                          bounds=(support, N), bounds_warning=True, support=support)
    return out, homs


def nakayama_nu(v: TruncatedModule) -> TruncatedModule:
    """Degreewise dual of Hom(V, P(x)); kills torsion, support <= gen degree."""
    if v.kind == CatKind.FI:
        return _nu_fi(v)[0]
    return _nu_oi(v)[0]


# ---------------------------------------------------------------------------
# inverse nu
# ---------------------------------------------------------------------------


class _InvDegree:
    """Degree-x solution data of the inverse: variable layout plus basis.

    FI variables are the coefficients at the order-preserving orbit
    representatives; an arbitrary injection h = f_S o pi expands through the
    degree-y representation matrix of pi^{-1}.
    """

    def __init__(self, kind, w, x: int):
        self.kind = kind
        self.w = w
        self.x = x
        self.blocks: list[tuple[int, list[tuple[int, ...]], int, int]] = []
        self.index: dict = {}
        nvars = 0
        top = w.top_support()
        for y in range(min(x, top) + 1):
            if w.dims[y] == 0:
                continue
            reps = list(combinations(range(1, x + 1), y))
            self.blocks.append((y, reps, w.dims[y], nvars))
            for r_i, rep in enumerate(reps):
                for b in range(w.dims[y]):
                    self.index[(y, rep, b)] = nvars + r_i * w.dims[y] + b
            nvars += len(reps) * w.dims[y]
        self.nvars = nvars
        self.solutions: Optional[RationalMatrix] = None  # rows = basis

    def expand(self, y: int, values: tuple[int, ...], b: int, wrep) -> list[tuple[int, mpq]]:
        """c_{h, b} as a combination of the orbit-representative variables."""
        if self.kind == CatKind.OI:
            key = (y, values, b)
            return [(self.index[key], QONE)] if key in self.index else []
        s = tuple(sorted(values))
        if (y, s, 0) not in self.index:
            return []
        order = {val: k + 1 for k, val in enumerate(s)}
        pi = tuple(order[val] for val in values)
        if pi == tuple(range(1, y + 1)):
            return [(self.index[(y, s, b)], QONE)]
        m = wrep(y, perm_inverse(pi))
        out = []
        for c in range(self.w.dims[y]):
            if m.data[b][c]:
                out.append((self.index[(y, s, c)], m.data[b][c]))
        return out

    @property
    def dim(self) -> int:
        return self.solutions.rows if self.solutions is not None else 0

    def coordinates_matrix(self, transformed: RationalMatrix) -> RationalMatrix:
        """Express rows of `transformed` (in this layout) in the solution basis."""
        if self.dim == 0:
            return RationalMatrix.zeros(0, transformed.rows)
        out = solve(self.solutions.transpose(), transformed.transpose())
        if out is None:
            raise ValueError("vector outside the solution space")
        return out


def _w_rep_cache(w: TruncatedModule):
    cache: dict = {}

    def wrep(y: int, perm: tuple[int, ...]) -> RationalMatrix:
        key = (y, perm)
        if key not in cache:
            from .symrep import rep_matrix

            cache[key] = rep_matrix(w.gens_at(y), perm, w.dims[y])
        return cache[key]

    return wrep


def _inverse_data(w: TruncatedModule, window: int):
    """Solve the inverse Nakayama functor degree by degree."""
    kind = w.kind
    top = w.top_support()
    wrep = _w_rep_cache(w) if kind == CatKind.FI else None
    layouts: list[_InvDegree] = []
    for x in range(window + 1):
        lay = _InvDegree(kind, w, x)
        if lay.nvars == 0:
            lay.solutions = RationalMatrix.zeros(0, 0)
            layouts.append(lay)
            continue
        cons = RowReducer(lay.nvars)
        for y in range(min(x, w.window - 1) + 1):
            wz = w.dims[y + 1] if y + 1 <= w.window else 0
            if wz == 0:
                continue
            reps = list(combinations(range(1, x + 1), y))
            if kind == CatKind.FI:
                wiota = w.iota(y)
                for rep in reps:
                    avail = [t for t in range(1, x + 1) if t not in rep]
                    for b in range(wz):
                        row = [QZERO] * lay.nvars
                        used = False
                        for c in range(w.dims[y]):
                            if wiota.data[b][c]:
                                row[lay.index[(y, rep, c)]] += wiota.data[b][c]
                                used = True
                        for t in avail:
                            for var, coeff in lay.expand(y + 1, rep + (t,), b, wrep):
                                row[var] -= coeff
                                used = True
                        if used and any(row):
                            cons.add(row)
            else:
                for i in range(1, y + 2):
                    wal = w.coface_matrix(y, i)
                    for rep in reps:
                        lo = rep[i - 2] if i >= 2 else 0
                        hi = rep[i - 1] if i <= y else x + 1
                        for b in range(wz):
                            row = [QZERO] * lay.nvars
                            for c in range(w.dims[y]):
                                if wal.data[b][c]:
                                    row[lay.index[(y, rep, c)]] += wal.data[b][c]
                            for t in range(lo + 1, hi):
                                ins = rep[: i - 1] + (t,) + rep[i - 1 :]
                                key = (y + 1, ins, b)
                                if key in lay.index:
                                    row[lay.index[key]] -= QONE
                            if any(row):
                                cons.add(row)
        sol = nullspace(cons.basis_matrix()) if cons.rank else Subspace(
            lay.nvars, RationalMatrix.identity(lay.nvars)
        )
        lay.solutions = sol.basis
        layouts.append(lay)

    dims = [lay.dim for lay in layouts]
    N = window
    if kind == CatKind.FI:
        gens: dict = {}
        for x in range(2, N + 1):
            lay = layouts[x]
            mats = []
            for k in range(1, x):
                if lay.dim == 0:
                    mats.append(RationalMatrix.zeros(0, 0))
                    continue
                transformed = RationalMatrix.zeros(lay.dim, lay.nvars)
                for r, srow in enumerate(lay.solutions.data):
                    for (y, reps, wy, off) in lay.blocks:
                        for rep in reps:
                            pre = tuple(_s(k, x)[val - 1] for val in rep)
                            for b in range(wy):
                                total = QZERO
                                for var, coeff in lay.expand(y, pre, b, wrep):
                                    total += coeff * srow[var]
                                transformed.data[r][lay.index[(y, rep, b)]] = total
                mats.append(lay.coordinates_matrix(transformed))
            gens[x] = mats
        maps = {}
        for x in range(N):
            src, dst = layouts[x], layouts[x + 1]
            m = RationalMatrix.zeros(dst.dim, src.dim)
            if src.dim and dst.dim:
                transformed = RationalMatrix.zeros(src.dim, dst.nvars)
                for r, srow in enumerate(src.solutions.data):
                    for (y, reps, wy, off) in dst.blocks:
                        for rep in reps:
                            if rep and rep[-1] > x:
                                continue
                            for b in range(wy):
                                if (y, rep, b) in src.index:
                                    transformed.data[r][dst.index[(y, rep, b)]] = srow[
                                        src.index[(y, rep, b)]
                                    ]
                m = dst.coordinates_matrix(transformed)
            maps[x] = m
        out = TruncatedModule(kind, N, dims, gens, maps)
    else:
        maps = {}
        for x in range(N):
            src, dst = layouts[x], layouts[x + 1]
            mats = []
            for i in range(1, x + 2):
                m = RationalMatrix.zeros(dst.dim, src.dim)
                if src.dim and dst.dim:
                    shift_val = lambda t: t if t < i else t - 1
                    transformed = RationalMatrix.zeros(src.dim, dst.nvars)
                    for r, srow in enumerate(src.solutions.data):
                        for (y, reps, wy, off) in dst.blocks:
                            for rep in reps:
                                if i in rep:
                                    continue
                                pre = tuple(shift_val(t) for t in rep)
                                for b in range(wy):
                                    if (y, pre, b) in src.index:
                                        transformed.data[r][dst.index[(y, rep, b)]] = srow[
                                            src.index[(y, pre, b)]
                                        ]
                    m = dst.coordinates_matrix(transformed)
                mats.append(m)
            maps[x] = mats
        out = TruncatedModule(kind, N, dims, None, maps)
    recompute_bounds(out)
    return out, layouts


def inverse_nakayama(w: TruncatedModule, window: int) -> TruncatedModule:
    """Natural families dual(W) -> representables; exact at every degree."""
    return _inverse_data(w, window)[0]


# ---------------------------------------------------------------------------
# sheafification
# ---------------------------------------------------------------------------


def sheafify(v: TruncatedModule):
    """(sheaf, unit): the inverse of nu applied to nu, with the evaluation unit."""
    if v.bounds is None:
        raise ValueError("bounds are required")
    if v.kind == CatKind.FI:
        w, homs = _nu_fi(v)
    else:
        w, homs = _nu_oi(v)
    sheaf, layouts = _inverse_data(w, v.window)
    comps = []
    for x in range(v.window + 1):
        lay = layouts[x]
        mat = RationalMatrix.zeros(lay.dim, v.dims[x])
        if lay.dim and v.dims[x]:
            reduced = RationalMatrix.zeros(v.dims[x], lay.nvars)
            for (y, reps, wy, off) in lay.blocks:
                if v.kind == CatKind.FI:
                    basis = homs[y]
                    # rows theta_x o rho(sigma_{f_S}^{-1}) per (rep, solution)
                    for j in range(wy):
                        theta = basis.thetas[j]
                        if x < y or v.dims[x] == 0 or x not in theta:
                            continue
                        rows = _coset_rows(v, x, y, theta[x], order_preserving_only=True)
                        for r_i, rep in enumerate(reps):
                            row = rows[r_i]
                            col = lay.index[(y, rep, j)]
                            for vi in range(v.dims[x]):
                                reduced.data[vi][col] = row[vi]
                else:
                    basis_list = homs[y]
                    oi_basis = hom_set(CatKind.OI, y, x)
                    pos = {f.values: r for r, f in enumerate(oi_basis)}
                    for j, phi in enumerate(basis_list):
                        for rep in reps:
                            col = lay.index[(y, rep, j)]
                            r_idx = pos[rep]
                            for vi in range(v.dims[x]):
                                reduced.data[vi][col] = phi.comps[x].data[r_idx][vi]
            mat = lay.coordinates_matrix(reduced)
        comps.append(mat)
    unit = ModuleMorphism(v, sheaf, comps)
    return sheaf, unit


def is_saturated(v: TruncatedModule) -> bool:
    """True iff the sheafification unit is a degreewise isomorphism."""
    if v.bounds is None:
        raise ValueError("bounds are required")
    if not is_separated(v):
        return False
    _, unit = sheafify(v)
    return unit.is_isomorphism()


def fi_sheaf_check_invariants(v: TruncatedModule) -> bool:
    """Second saturation criterion: V_n must be exactly the vectors of the
    top degree fixed by the permutations that leave [n] pointwise fixed.

    At a finite window the plain fixed space is too big: the tail [n+1..N]
    is a finite orbit, so its orbit sum is an invariant that has no
    counterpart over the infinite-support limit.  Intersecting with the
    image of degree N-1 removes exactly these artifacts (a genuine invariant
    of the limit must arise from below and stay invariant).
    """
    from .linalgq import intersect

    if v.kind != CatKind.FI:
        raise ValueError("applies to FI modules")
    if v.bounds is None:
        raise ValueError("bounds are required")
    N, g = v.window, v.bounds[0]
    if N < 2 * g + 1:
        raise ValueError("window too small for the invariants criterion")
    for n in range(g + 1):
        comp = RationalMatrix.identity(v.dims[n])
        for k in range(n, N):
            comp = v.iota(k) @ comp
        if nullspace(comp).dim:
            return False
        gens = [v.gens_at(N)[k - 1] for k in range(n + 1, N)]
        fixed = (
            invariant_subspace(gens)
            if gens
            else Subspace(v.dims[N], RationalMatrix.identity(v.dims[N]))
        )
        stable = intersect(fixed, row_space(v.iota(N - 1).transpose()))
        if row_space(comp.transpose()) != stable:
            return False
    return True


# ---------------------------------------------------------------------------
# simple saturated modules
# ---------------------------------------------------------------------------


class _SparseQ:
    """Sparse rational matrix as per-row dicts, for character products."""

    def __init__(self, n: int, rows: list[dict[int, mpq]]):
        self.n = n
        self.rows = rows

    @staticmethod
    def from_dense(m: RationalMatrix) -> "_SparseQ":
        return _SparseQ(
            m.rows, [{j: x for j, x in enumerate(row) if x} for row in m.data]
        )

    def __matmul__(self, other: "_SparseQ") -> "_SparseQ":
        rows: list[dict[int, mpq]] = []
        for r in self.rows:
            acc: dict[int, mpq] = {}
            for k, a in r.items():
                for j, b in other.rows[k].items():
                    acc[j] = acc.get(j, QZERO) + a * b
            rows.append({j: x for j, x in acc.items() if x})
        return _SparseQ(self.n, rows)

    def trace_with(self, dense: RationalMatrix) -> mpq:
        total = QZERO
        for i, r in enumerate(self.rows):
            for j, a in r.items():
                total += a * dense.data[j][i]
        return total


def _projection_onto(basis_rows: RationalMatrix) -> RationalMatrix:
    """Orthogonal projection (standard form) onto the row span."""
    b = basis_rows
    gram = b @ b.transpose()
    inv = solve(gram, RationalMatrix.identity(b.rows))
    return b.transpose() @ inv @ b


def _subspace_characters(
    ambient: TruncatedModule, n: int, basis_rows: RationalMatrix
) -> dict[Partition, mpq]:
    """Character of an invariant subspace, via traces against the ambient."""
    if basis_rows.rows == 0:
        return {ct.parts: QZERO for ct in cycle_types(n)}
    proj = _projection_onto(basis_rows)
    sparse_gens = [_SparseQ.from_dense(g) for g in ambient.gens_at(n)]
    ident = _SparseQ(
        ambient.dims[n], [{i: QONE} for i in range(ambient.dims[n])]
    )
    out = {}
    for ct in cycle_types(n):
        m = ident
        for i in adjacent_word(ct.representative()):
            m = m @ sparse_gens[i - 1]
        out[ct.parts] = m.trace_with(proj)
    return out


def simple_saturated(lam: Partition, window: int) -> TruncatedModule:
    """L_lambda: the simple saturated FI-module indexed by lambda.

    Realized inside P(lambda): the bottom degree |lambda| + lambda_1 carries
    the (unique) isotypic copy of the uniform padding of lambda, and higher
    degrees are its closure under the category action.  Degreewise
    characters are cached from honest trace computations in the ambient.
    """
    m = lam.size
    if m == 0:
        return free_module(CatKind.FI, 0, window)
    n0 = m + lam.parts[0]
    if n0 > window:
        raise ValueError("window too small to see the support")
    amb = induced_projective(lam, window)
    mu0 = pad_uniform(lam, n0)
    bottom = _isotypic_subspace(amb, n0, mu0, lam)
    if bottom.dim != hook_dimension(mu0):
        raise ValueError("bottom isotypic component has unexpected dimension")
    spaces: list[Subspace] = []
    for n in range(n0):
        spaces.append(Subspace(amb.dims[n], RationalMatrix.zeros(0, amb.dims[n])))
    spaces.append(bottom)
    for n in range(n0, window):
        seeds = [amb.iota(n).apply(row) for row in spaces[n].basis.data]
        red = RowReducer(amb.dims[n + 1])
        _close_under(red, seeds, amb.gens_at(n + 1))
        spaces.append(span_of_vectors(red.rows, amb.dims[n + 1]))
    sub, _ = submodule(amb, spaces)
    for n in range(n0, window + 1):
        sub.char_cache[n] = _subspace_characters(amb, n, spaces[n].basis)
    return sub


def _horizontal_strip_additions(lam: Partition, n: int) -> set[Partition]:
    """Shapes obtained from lam by adding n - |lam| boxes, no two in a column."""
    extra = n - lam.size
    parts = lam.parts
    out: set[Partition] = set()

    def rec(i: int, built: tuple[int, ...], remaining: int):
        if i == len(parts) + 1:
            if remaining == 0:
                out.add(Partition(tuple(p for p in built if p)))
            return
        old = parts[i] if i < len(parts) else 0
        # no two added boxes in a column: row i may grow only up to the old
        # length of row i-1; weak decrease is then automatic
        cap = parts[i - 1] if i >= 1 else old + remaining
        for new in range(old, min(cap, old + remaining) + 1):
            rec(i + 1, built + (new,), remaining - (new - old))

    rec(0, (), extra)
    return out


def _isotypic_subspace(
    v: TruncatedModule, n: int, mu: Partition, source_shape: Partition
) -> Subspace:
    """Isotypic component of shape mu in degree n, via class-sum eigenspaces.

    Only shapes that can actually occur (ambient is induced from v's bottom
    shape, so a horizontal-strip rule bounds the candidates) need separating,
    and small conjugacy classes are tried first.
    """
    from .linalgq import intersect
    from .symrep import cycle_type_of

    d = v.dims[n]
    gens = [_SparseQ.from_dense(g) for g in v.gens_at(n)]

    def class_sum(ct) -> RationalMatrix:
        from itertools import permutations as _perms

        target = tuple(
            sorted(ct.parts.parts + (1,) * (n - ct.parts.size), reverse=True)
        )
        total = RationalMatrix.zeros(d, d)
        for g in _perms(range(1, n + 1)):
            if cycle_type_of(g).parts != target:
                continue
            m_g = _SparseQ(d, [{i: QONE} for i in range(d)])
            for i in adjacent_word(g):
                m_g = m_g @ gens[i - 1]
            for r, row in enumerate(m_g.rows):
                for c, val in row.items():
                    total.data[r][c] += val
        return total

    def eigval(ct, shape: Partition) -> mpq:
        return mpq(ct.class_size * mn_character(shape, ct)) / hook_dimension(shape)

    space = Subspace(d, RationalMatrix.identity(d))
    candidates = _horizontal_strip_additions(source_shape, n)
    candidates.add(mu)
    for ct in sorted(cycle_types(n), key=lambda c: c.class_size):
        if len(candidates) == 1:
            break
        lam_val = eigval(ct, mu)
        if all(eigval(ct, other) == lam_val for other in candidates):
            continue
        cs = class_sum(ct)
        eig = nullspace(cs - RationalMatrix.identity(d).scale(lam_val))
        space = intersect(space, eig)
        candidates = {sh for sh in candidates if eigval(ct, sh) == lam_val}
    if len(candidates) != 1:
        raise ValueError(f"class sums do not separate {mu} at degree {n}")
    return space


def simple_saturated_oi(m: int, window: int) -> TruncatedModule:
    """The OI simple saturated module with bottom degree m."""
    if m == 0:
        return free_module(CatKind.OI, 0, window)
    w = simple_at_oi(m, window)
    return inverse_nakayama(w, window)


def composition_factors_sheaf(v: TruncatedModule) -> dict:
    """Jordan-Holder factors of the associated sheaf, read off nu degreewise."""
    w = nakayama_nu(v)
    out: dict = {}
    for x in range(w.window + 1):
        if w.dims[x] == 0:
            continue
        if v.kind == CatKind.FI:
            for shape, mult in w.decompose_degree(x).items():
                out[shape] = out.get(shape, 0) + mult
        else:
            out[x] = out.get(x, 0) + w.dims[x]
    return out


# ---------------------------------------------------------------------------
# generation / presentation degrees
# ---------------------------------------------------------------------------


def generation_degree(v: TruncatedModule) -> int:
    return generation_degree_scan(v)


def _equivariant_maps(v: TruncatedModule, n: int, mu: Partition) -> list[RationalMatrix]:
    """Basis of the equivariant maps from the irreducible of shape mu into V_n."""
    f = hook_dimension(mu)
    d = v.dims[n]
    if d == 0:
        return []
    if n <= 1:
        return [RationalMatrix.column([QONE if i == r else QZERO for i in range(d)])
                for r in range(d)]
    irr = irrep_matrices(mu)
    nvars = d * f
    cons = RowReducer(nvars)
    for gv, gm in zip(v.gens_at(n), irr.generators):
        for i in range(d):
            for j in range(f):
                row = [QZERO] * nvars
                for k in range(d):
                    if gv.data[i][k]:
                        row[k * f + j] += gv.data[i][k]
                for k in range(f):
                    if gm.data[k][j]:
                        row[i * f + k] -= gm.data[k][j]
                if any(row):
                    cons.add(row)
    sol = nullspace(cons.basis_matrix()) if cons.rank else Subspace(
        nvars, RationalMatrix.identity(nvars)
    )
    out = []
    for x in sol.basis.data:
        m = RationalMatrix.zeros(d, f)
        for i in range(d):
            for j in range(f):
                m.data[i][j] = x[i * f + j]
        out.append(m)
    return out


def _apply_injection_columns(v: TruncatedModule, f: Injection, x: RationalMatrix) -> RationalMatrix:
    """Action of f on each column of x, letter by letter."""
    cols = [x.col(j) for j in range(x.cols)]
    if v.kind == CatKind.FI:
        sigma, k = canonical_factorization(CatKind.FI, f)
        for n in range(f.m, f.m + k):
            mat = v.iota(n)
            cols = [mat.apply(c) for c in cols]
        gens = v.gens_at(f.n)
        word = adjacent_word(sigma.values)
        for i in reversed(word):
            cols = [gens[i - 1].apply(c) for c in cols]
    else:
        chain, _ = canonical_factorization(CatKind.OI, f)
        for c_mor in reversed(chain):
            i = next(val for val in range(1, c_mor.n + 1) if val not in set(c_mor.values))
            mat = v.coface_matrix(c_mor.m, i)
            cols = [mat.apply(c) for c in cols]
    out = RationalMatrix.zeros(v.dims[f.n], x.cols)
    for j, c in enumerate(cols):
        for i, val in enumerate(c):
            out.data[i][j] = val
    return out


def _canonical_cover(v: TruncatedModule):
    """(cover module, cover morphism) with the cover a sum of projectives
    generated in degrees up to the generation degree."""
    t0 = generation_degree_scan(v)
    summands: list[tuple[TruncatedModule, list[RationalMatrix]]] = []
    N = v.window
    for n in range(t0 + 1):
        if v.dims[n] == 0:
            continue
        if v.kind == CatKind.FI:
            for mu in partitions_of(n) if n >= 1 else [Partition(())]:
                for xmat in _equivariant_maps(v, n, mu):
                    proj = induced_projective(mu, N) if n >= 1 else free_module(CatKind.FI, 0, N)
                    comps = []
                    f_dim = xmat.cols
                    for d in range(N + 1):
                        mat = RationalMatrix.zeros(v.dims[d], proj.dims[d])
                        if d >= n:
                            for s_i, s in enumerate(combinations(range(1, d + 1), n)):
                                block = _apply_injection_columns(
                                    v, Injection(n, d, s), xmat
                                )
                                for a in range(v.dims[d]):
                                    for b in range(f_dim):
                                        mat.data[a][s_i * f_dim + b] = block.data[a][b]
                        comps.append(mat)
                    summands.append((proj, comps))
        else:
            below = v._span_from_below(n) if n > 0 else RowReducer(v.dims[0])
            pivots = set(below.pivots)
            for i in range(v.dims[n]):
                if i in pivots:
                    continue
                seed = [QONE if j == i else QZERO for j in range(v.dims[n])]
                proj = free_module(CatKind.OI, n, N)
                comps = []
                for d in range(N + 1):
                    mat = RationalMatrix.zeros(v.dims[d], proj.dims[d])
                    for c_i, fmor in enumerate(hom_set(CatKind.OI, n, d)):
                        col = v.morphism_matrix(fmor).apply(seed)
                        for a in range(v.dims[d]):
                            mat.data[a][c_i] = col[a]
                    comps.append(mat)
                summands.append((proj, comps))
    if not summands:
        z = zero_module(v.kind, N)
        return z, ModuleMorphism(z, v, [RationalMatrix.zeros(v.dims[d], 0) for d in range(N + 1)])
    cover = summands[0][0]
    for s, _ in summands[1:]:
        cover = direct_sum(cover, s)
    comps = [
        RationalMatrix.hstack([c[d] for _, c in summands]) for d in range(N + 1)
    ]
    return cover, ModuleMorphism(cover, v, comps)


def presentation_degree(v: TruncatedModule) -> PresentationBounds:
    """Generation degree and relation degree from the canonical cover."""
    t0 = generation_degree_scan(v)
    cover, phi = _canonical_cover(v)
    # the cover must be degreewise surjective
    for d in range(v.window + 1):
        if row_space(phi.comps[d].transpose()).dim != v.dims[d]:
            raise ValueError(f"canonical cover misses degree {d}")
    ker, _ = kernel_morphism(phi)
    r = generation_degree_scan(ker)
    if r == v.window and not ker._degree_generated_from_below(v.window):
        if any(ker.dims):
            raise ValueError("window exhausted before the relations stabilized")
    return PresentationBounds(t0, r)
