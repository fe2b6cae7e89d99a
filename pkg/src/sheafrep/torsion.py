"""Window torsion theory: torsion submodule, torsion-free quotient,
separatedness, degree-zero local cohomology, saturation defect.

A vector at degree n is window-torsion when some composite of structure
maps into a higher window degree kills it.  Results carry a reliable range:
degrees up to window - (generation degree + 1) are exact regardless of the
truncation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalgq import RationalMatrix, Subspace, kernel as nullspace, span_of_vectors, subspace_sum
from .skelcat import CatKind, hom_set
from .modcore import (
    ModuleMorphism,
    TruncatedModule,
    generation_degree_scan,
    quotient,
    submodule,
)
from .modcore import is_separated as _is_separated


@dataclass
class TorsionDecomposition:
    torsion_part: TruncatedModule
    free_part: TruncatedModule
    inclusion: ModuleMorphism
    projection: ModuleMorphism
    reliable_up_to: int


def _zero_subspace(dim: int) -> Subspace:
    return Subspace(dim, RationalMatrix.zeros(0, dim))


def _torsion_spaces(v: TruncatedModule) -> list[Subspace]:
    """Degreewise span of the window-torsion vectors.

    FI: all morphisms n -> N share one kernel, that of the inclusion
    composite.  OI: a vector killed by any single composite is torsion, so
    the degree-n space is the sum of the kernels over hom(n, N); the spaces
    are then closed under the structure maps, which only adds images of
    torsion vectors.
    """
    N = v.window
    spaces = []
    for n in range(N + 1):
        if v.dims[n] == 0:
            spaces.append(_zero_subspace(0))
            continue
        if v.kind == CatKind.FI:
            comp = RationalMatrix.identity(v.dims[n])
            for k in range(n, N):
                comp = v.iota(k) @ comp
            spaces.append(nullspace(comp))
        else:
            total = _zero_subspace(v.dims[n])
            for f in hom_set(CatKind.OI, n, N):
                total = subspace_sum(total, nullspace(v.morphism_matrix(f)))
            spaces.append(total)
    # close upward under the structure maps
    for n in range(N):
        mats = [v.iota(n)] if v.kind == CatKind.FI else list(v.maps[n])
        extra = []
        for m in mats:
            for row in spaces[n].basis.data:
                extra.append(m.apply(row))
        if extra:
            spaces[n + 1] = subspace_sum(
                spaces[n + 1], span_of_vectors(extra, v.dims[n + 1])
            )
    return spaces


def reliable_range(v: TruncatedModule) -> int:
    g = v.bounds[0] if v.bounds else generation_degree_scan(v)
    return max(v.window - (g + 1), 0)


def torsion_submodule(v: TruncatedModule) -> TorsionDecomposition:
    spaces = _torsion_spaces(v)
    tors, incl = submodule(v, spaces)
    free, proj = quotient(v, spaces)
    return TorsionDecomposition(tors, free, incl, proj, reliable_range(v))


def is_separated(v: TruncatedModule) -> bool:
    """True iff every structure map on the window is injective."""
    return _is_separated(v)


def h0_local(v: TruncatedModule):
    """Degree-zero local cohomology: vectors killed by a power of the ideal
    spanned by the non-invertible morphisms.

    Computed by iterating preimages: A^1 is the common kernel of the
    one-step maps (zero at the top degree, where no window map exists), and
    A^{s+1} the preimage of A^s under every one-step map.  This is a second,
    independent route to the torsion submodule.
    """
    N = v.window
    spaces = [_zero_subspace(v.dims[n]) for n in range(N + 1)]
    changed = True
    while changed:
        changed = False
        for n in range(N):
            mats = [v.iota(n)] if v.kind == CatKind.FI else list(v.maps[n])
            target = spaces[n + 1]
            # preimage of target under every one-step map simultaneously
            blocks = []
            for m in mats:
                if target.dim == 0:
                    blocks.append(m)
                else:
                    # w lands in target iff every annihilator row kills m w
                    ann = nullspace(target.basis).basis
                    blocks.append(ann @ m)
            stacked = RationalMatrix.vstack(blocks) if blocks else RationalMatrix.zeros(0, v.dims[n])
            new = nullspace(stacked)
            if new.dim != spaces[n].dim:
                spaces[n] = new
                changed = True
    sub, incl = submodule(v, spaces)
    return sub, incl, spaces


def saturation_defect(v: TruncatedModule) -> TruncatedModule:
    """Cokernel of the sheafification unit; zero iff v is saturated."""
    if not is_separated(v):
        raise ValueError("saturation defect is defined for separated modules")
    if v.bounds is None:
        raise ValueError("bounds are required")
    from .nakayama import sheafify

    _, unit = sheafify(v)
    from .modcore import cokernel_morphism

    coker, _ = cokernel_morphism(unit)
    return coker
