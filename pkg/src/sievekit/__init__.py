"""Finite sites, sheaves, Gabriel filters and Cat-enriched homotopy topologies."""
from sievekit.errors import GuardExceeded, MalformedError, Violation
from sievekit.fincat import FinCategory, FunctorData, SetPresheaf, PresheafMap, yoneda, presheaf_hom
from sievekit.sieves import (
    Sieve,
    GrothendieckTopology,
    check_topology,
    enumerate_topologies,
    sheaf_check,
    sheafify,
)
from sievekit.gabriel import (
    FinRing,
    RightIdeal,
    IdealFilter,
    enumerate_right_ideals,
    enumerate_gabriel_filters,
    check_gabriel_filter,
    check_ab_enriched_topology,
)
from sievekit.cat2 import (
    FinCat2,
    CatSieve,
    CatTopology,
    is_homotopy_mono_functor,
    iso_comma,
    check_cat_topology,
    induced_topology,
    lift_topology,
)

__version__ = "0.1.0"
