"""Quantitative asymptotic regularity for Ishikawa iterations in uniformly
convex hyperbolic spaces.

Submodules
----------
spaces    W-hyperbolic model spaces and convex subsets
modulus   moduli of uniform convexity and their verification
mappings  nonexpansive maps and a nonexpansiveness checker
iterate   Picard, Krasnoselski-Mann and Ishikawa orbits, schedules
rates     explicit rate certificates
analysis  asymptotic centers, projections, fixed-point diagnostics
harness   config-driven experiments
"""

from .iterate import ishikawa_orbit, km_orbit, make_schedule, picard_orbit
from .mappings import make_map
from .modulus import cat0_modulus, lp_modulus, make_modulus
from .rates import RateInputs, phi_main
from .spaces import make_set, make_space

__version__ = "0.1.0"

__all__ = ["RateInputs", "cat0_modulus", "ishikawa_orbit", "km_orbit", "lp_modulus",
           "make_map", "make_modulus", "make_schedule", "make_set", "make_space",
           "phi_main", "picard_orbit"]
