"""Exact pp-formula workbench: finite and Euclidean rings, finitely presented
modules, pp formulas with free realizations, Bass chains, and small-ring
decomposition data."""
from .errors import AxiomViolation, CapExceeded, InternalError, ParseError, PPBassError, PreconditionError
from .rings import (INTEGERS, FiniteRing, PolyRing, construct_ring, is_unit, matrix_ring,
                    product_ring, truncated_poly, upper_triangular, zmod)
from .modules import (FpModule, ModHom, Submodule, cyclic, direct_power, direct_sum, find_isomorphism,
                      free_module, hom_search, is_direct_summand, present_module, solve_linear)
from .pp import (PpFormula, PpPair, ann, bottom, conj, div, equivalent, evaluate, free_realization,
                 implies, make_pp, pp_sum, random_formula, satisfies, top)
from .bass import (PpChain, build_stages, classical_chain, perfectness_witness, pp_type_window,
                   profile_equiv_check, stabilization_check)
from .invariants import (equiv_weak_powers, gamma_family, is_pure_submodule, ml_certificate, pp_index,
                         weak_power_profile)
from .classifier import classify, decompose_regular, is_local, jacobson_radical, rj_simple
from .kernels import BACKEND

__version__ = "0.1.0"
