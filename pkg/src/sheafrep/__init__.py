"""Exact computations with truncated FI/OI-modules, their torsion theory,
and the sheaf/finite-dimensional correspondence via the Nakayama functor."""

from .combinat import Partition, pad_uniform, partitions_of
from .modcore import (
    ModuleMorphism,
    TruncatedModule,
    direct_sum,
    find_isomorphism,
    free_module,
    induced_projective,
    module_morphism_space,
    shift,
    simple_at,
    simple_at_oi,
)
from .nakayama import (
    inverse_nakayama,
    is_saturated,
    nakayama_nu,
    presentation_degree,
    sheafify,
    simple_saturated,
    simple_saturated_oi,
)
from .skelcat import CatKind, Injection
from .torsion import h0_local, is_separated, saturation_defect, torsion_submodule

__version__ = "0.1.0"

__all__ = [
    "CatKind",
    "Injection",
    "ModuleMorphism",
    "Partition",
    "TruncatedModule",
    "direct_sum",
    "find_isomorphism",
    "free_module",
    "h0_local",
    "induced_projective",
    "inverse_nakayama",
    "is_saturated",
    "is_separated",
    "module_morphism_space",
    "nakayama_nu",
    "pad_uniform",
    "partitions_of",
    "presentation_degree",
    "saturation_defect",
    "sheafify",
    "shift",
    "simple_at",
    "simple_at_oi",
    "simple_saturated",
    "simple_saturated_oi",
    "torsion_submodule",
]
