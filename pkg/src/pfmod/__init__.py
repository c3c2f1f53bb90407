"""Exact finite-quotient fingerprints and invariants of finitely presented modules.

Supported rings: the integers, their localizations Z[1/S], maximal orders of
imaginary quadratic fields and the Laurent polynomial ring Z[x, 1/x].
"""
from .adic import (
    AdicTruncation, NotInvertibleError, adic_truncation, crt_decompose, hensel_invert,
    localized_fingerprint, tower_map,
)
from .bs import (
    BsGroup, OrderProfile, abelianization, conjugacy_module, order_profile, prime_support_check,
    restrict_quotient_to_module, rigidity_scan, standard_quotients,
)
from .fileio import FingerprintCache, ModuleFileError, emit_module, parse_module_file
from .finite import DEFAULT_CEILING, FiniteModule, ResourceLimitError, canonical_code
from .genus import (
    FormClassGroup, GenusTable, class_group, genus_candidates, ideal_to_class, steinitz_class,
)
from .ideals import (
    LaurentIdeal, NotMaximalError, PrincipalIdeal, QuadIdeal, maximal_ideals, power_quotient,
)
from .invariants import (
    InvariantReport, NotProjective, ProjectiveOfRank, UnsupportedError, annihilator,
    fitting_ideal, invariant_report, mu_local, projectivity_verdict,
    truncated_profinite_annihilator,
)
from .modules import (
    FpModule, SteinitzModule, cyclic_module, direct_sum, free_module, steinitz_to_presentation,
    zero_module,
)
from .quotients import (
    Distinguished, Fingerprint, IndistinguishableUpTo, compare, epi_implies_iso_check,
    fingerprint, m_nu_quotient,
)
from .rings import ZZ, Laurent, LaurentZ, QuadOrder, ZZLoc, parse_ring_tag

__all__ = [name for name in dir() if not name.startswith("_")]  # noqa: F405
