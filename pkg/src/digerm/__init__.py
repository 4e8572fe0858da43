"""Branching and merging spaces and homology of finite cellular
multipointed d-spaces."""

from .branching import CWComplexData, ComponentMap, branching_space, merging_space, pi0
from .globular import GlobularCell, GlobularComplex, globe, op, realize, validate_complex
from .homology import (ChainComplex, HomologyGroup, branching_homology, homology,
                       merging_homology)
from .precubical import PrecubicalSet, gen_cube, gen_example, validate
from .snf import snf

__all__ = [
    "CWComplexData", "ChainComplex", "ComponentMap", "GlobularCell", "GlobularComplex",
    "HomologyGroup", "PrecubicalSet", "branching_homology", "branching_space", "gen_cube",
    "gen_example", "globe", "homology", "merging_homology", "merging_space", "op", "pi0",
    "realize", "snf", "validate", "validate_complex",
]
