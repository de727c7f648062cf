"""Nonlinear entanglement witnesses built from linear ones."""

from .builders import NlewEvaluation, NlewKind, evaluate, f_basic, materialize, wl_ccnr, wl_dv
from .decomposition import decompose, local_basis, reconstruct
from .linalg import (
    canonical_basis,
    correlation_matrix_canonical,
    gell_mann,
    partial_trace,
    partial_transpose,
    realignment,
)
from .sepmax import closed_form_wlp, seesaw_max, witness_sepmax
from .states import DensityMatrix, family_registry, make_state, ppt_classify, product_state_from_bloch, sample_separable
from .witnesses import (
    Witness,
    certify_witness,
    expectation,
    k_term,
    make_witness,
    witness_registry,
    wl_c,
    wl_p,
    wl_projector,
    wl_psi_minus,
)

__version__ = "0.1.0"

__all__ = [
    "family_registry",
    "witness_registry",
    "wl_psi_minus",
    "NlewEvaluation",
    "NlewKind",
    "evaluate",
    "f_basic",
    "materialize",
    "wl_ccnr",
    "wl_dv",
    "decompose",
    "local_basis",
    "reconstruct",
    "canonical_basis",
    "correlation_matrix_canonical",
    "gell_mann",
    "partial_trace",
    "partial_transpose",
    "realignment",
    "closed_form_wlp",
    "seesaw_max",
    "witness_sepmax",
    "DensityMatrix",
    "make_state",
    "ppt_classify",
    "product_state_from_bloch",
    "sample_separable",
    "Witness",
    "certify_witness",
    "expectation",
    "k_term",
    "make_witness",
    "wl_c",
    "wl_p",
    "wl_projector",
]
