"""Exact computations with finite F_p-linear preadditive categories.

The package verifies, by exhaustive enumeration with independent oracles, the
classification bijections tying the ideal theory of a small linear category
to the torsion theory of its module category: linear Grothendieck topologies
against hereditary torsion classes, idempotent ideals against TTF triples,
central idempotents against split TTF triples, and traces of projectives
against recollement data.
"""

from .category import FinCat, Morphism, catalog, from_ring_table, opposite, validate
from .ideals import Ideal, enumerate_ideals, generated_by, is_idempotent, product, quotient_category
from .linalg import Mat, Subspace
from .modules import FinModule, enumerate_modules, hom_space, representable
from .torsion import Topology, enumerate_topologies, gabriel_roundtrip
from .ttf import TTFTriple, jans_roundtrip, recollement_data, ttf_from_ideal

__all__ = [
    "FinCat",
    "FinModule",
    "Ideal",
    "Mat",
    "Morphism",
    "Subspace",
    "Topology",
    "TTFTriple",
    "catalog",
    "enumerate_ideals",
    "enumerate_modules",
    "enumerate_topologies",
    "from_ring_table",
    "gabriel_roundtrip",
    "generated_by",
    "hom_space",
    "is_idempotent",
    "jans_roundtrip",
    "opposite",
    "product",
    "quotient_category",
    "recollement_data",
    "representable",
    "ttf_from_ideal",
    "validate",
]

__version__ = "0.1.0"
