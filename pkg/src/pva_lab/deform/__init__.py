"""Degree-graded deformations: ansatz, catalog, coboundary functionals, flows, dimensions."""

from .ansatz import (
    Ansatz, AnsatzCoefficients, GaugeError, Slot, ansatz_slots, bracket_from_named,
    bracket_from_slots, build_ansatz, extract_coefficients, name_factor, parse_slot_name,
    slot_family, slot_name,
)
from .catalog import (
    REPRESENTATIVE_NAMES, Representative, base_bracket, bracket_by_name, representative,
    transpose_labels,
)
from .certify import Certificate, certify_nontrivial, constant_rank, miura_generator
from .flow import cohomology_dims, hamiltonian_flow, scalar_dims, series_h
from .functionals import CoboundaryFunctional, coboundary_functionals, evaluate_functionals

__all__ = [
    "Ansatz", "AnsatzCoefficients", "GaugeError", "Slot", "ansatz_slots", "bracket_from_named",
    "bracket_from_slots", "build_ansatz", "extract_coefficients", "name_factor",
    "parse_slot_name", "slot_family", "slot_name", "REPRESENTATIVE_NAMES", "Representative",
    "base_bracket", "bracket_by_name", "representative", "transpose_labels", "Certificate",
    "certify_nontrivial", "constant_rank", "miura_generator", "cohomology_dims",
    "hamiltonian_flow", "scalar_dims", "series_h", "CoboundaryFunctional",
    "coboundary_functionals", "evaluate_functionals",
]
