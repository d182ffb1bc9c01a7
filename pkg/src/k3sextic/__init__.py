"""Exact lattice computations showing that supersingular K3 surfaces in odd
characteristic are sextic double planes."""
from __future__ import annotations

from .constructions import (ParameterError, QuaternionParams, VenkovSpec, lambda_minus,
                            quaternion_order_gram, quaternion_params, root_lattice_gram,
                            venkov_gram, verify_lambda)
from .lattice import (IntegerLattice, discriminant, discriminant_group, orthogonal_complement,
                      parse_gram, signature)
from .quadbody import CosetConstraint, QuadraticForm, enumerate_points, jpi, project, search
from .roots import ADEType, ade_type, enumerate_roots, lattice_ade_type
from .tables import table_checks
from .theorem import Certificate, TheoremViolation, build_case, main_theorem_verify

__all__ = [
    "ADEType", "Certificate", "CosetConstraint", "IntegerLattice", "ParameterError",
    "QuadraticForm", "QuaternionParams", "TheoremViolation", "VenkovSpec", "ade_type",
    "build_case", "discriminant", "discriminant_group", "enumerate_points", "enumerate_roots",
    "jpi", "lambda_minus", "lattice_ade_type", "main_theorem_verify", "orthogonal_complement",
    "parse_gram", "project", "quaternion_order_gram", "quaternion_params", "root_lattice_gram",
    "search", "signature", "table_checks", "venkov_gram", "verify_lambda",
]
