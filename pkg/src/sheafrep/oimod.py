"""OI kernel-intersection modules K_n and their cross-validation.

K_n sits inside P(n); its degree-d piece is the intersection over i of the
spans of all left composites of the coface differences α_{n,i} − α_{n,i+1}.
Only left composites contribute: the identity is the sole OI endomorphism
of [n], so right composition leaves the P(n) column.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .linalgq import QONE, RationalMatrix, Subspace, intersect, span_of_vectors
from .modcore import (
    ModuleMorphism,
    TruncatedModule,
    free_module,
    module_morphism_space,
    submodule,
)
from .nakayama import simple_saturated_oi
from .skelcat import CatKind, coface, compose, hom_set


@dataclass(frozen=True)
class CofaceDifference:
    """Formal difference α_{n,i} − α_{n,i+1} as a vector in P(n)_{n+1}."""

    n: int
    i: int

    def __post_init__(self):
        if not 1 <= self.i <= self.n:
            raise ValueError("index must lie in [n]")

    @property
    def element(self) -> list[mpq]:
        basis = hom_set(CatKind.OI, self.n, self.n + 1)
        pos = {f.values: r for r, f in enumerate(basis)}
        vec = [mpq(0)] * len(basis)
        vec[pos[coface(self.n, self.i).values]] += QONE
        vec[pos[coface(self.n, self.i + 1).values]] -= QONE
        return vec


def kn_by_intersection(n: int, window: int) -> TruncatedModule:
    """The module K_n inside P(n); K_0 = P(0) by convention."""
    if n == 0:
        return free_module(CatKind.OI, 0, window)
    if n + 1 > window:
        raise ValueError("window too small: need n + 1 <= window")
    amb = free_module(CatKind.OI, n, window)
    spaces: list[Subspace] = []
    for d in range(window + 1):
        dim_d = amb.dims[d]
        basis_d = hom_set(CatKind.OI, n, d)
        pos = {f.values: r for r, f in enumerate(basis_d)}
        betas = hom_set(CatKind.OI, n + 1, d)
        space = None
        for i in range(1, n + 1):
            a_lo, a_hi = coface(n, i), coface(n, i + 1)
            vecs = []
            for beta in betas:
                vec = [mpq(0)] * dim_d
                vec[pos[compose(beta, a_lo).values]] += QONE
                vec[pos[compose(beta, a_hi).values]] -= QONE
                vecs.append(vec)
            span = span_of_vectors(vecs, dim_d)
            space = span if space is None else intersect(space, span)
        spaces.append(space)
    sub, _ = submodule(amb, spaces)
    return sub


@dataclass
class KnCrossCheck:
    n: int
    window: int
    hom_dim: int
    iso: ModuleMorphism | None

    @property
    def ok(self) -> bool:
        return self.iso is not None


def kn_cross_check(n: int, window: int) -> KnCrossCheck:
    """Explicit isomorphism K_n ≅ (inverse Nakayama of the degree-n simple).

    The morphism space must be one-dimensional and its generator degreewise
    invertible; any failure is reported, never papered over.
    """
    kn = kn_by_intersection(n, window)
    ln = simple_saturated_oi(n, window)
    homs = module_morphism_space(kn, ln)
    if len(homs) != 1:
        return KnCrossCheck(n, window, len(homs), None)
    h = homs[0]
    if not h.is_isomorphism():
        return KnCrossCheck(n, window, 1, None)
    return KnCrossCheck(n, window, 1, h)
