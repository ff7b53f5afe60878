"""Exact verification of FRT-type bialgebroids 𝔄(w), A_σ and the weak Hopf closure Φ."""
from .asigma import ASigma, SigmaFamily, build_I_sigma, check_sigma_conditions, verify_rigidity
from .aw import AwAlgebra, FaceWeight, check_face_conditions, verify_aw_bialgebroid
from .base import (AlgebraSpec, BaseMap, DegreeMap, FrobeniusSystem, center_basis, lift_frobenius,
                   matrix_algebra, parse_rational, rationals, shift, verify_frobenius)
from .instance import Instance, InstanceError, load_instance, parse_instance
from .membership import MembershipCertificate, membership_bounded
from .phi import build_phi, build_universal_F, build_w_sigma, verify_closure, verify_phi, verify_universal_F
from .quiver import Path, Quiver, build_sigma_quiver, fiber_product
from .report import Report
from .suites import SUITES, cmd_check, cmd_dims, run_suite
from .weak import (WeakASigma, WeakAw, WhaAntipode, check_generalized_inverse, verify_fminus_lemmas,
                   verify_weak_axioms, verify_weak_hopf)

__all__ = [name for name in dir() if not name.startswith("_")]
