"""Exact and asymptotic computation of SU(2) quantum invariants of Seifert manifolds."""

from .exact_core import BivariatePoly, bernoulli, faulhaber
from .moduli import SeifertData, enumerate_components, predicted_expansion
from .tqft_states import decompose_gluing, sigma_s1_state, z_k
from .verlinde import build_family, fusion_count_oracle, verlinde_number
from .xi_transform import pm, pm_inductive, pm_recurrence, xi_direct

__version__ = "0.1.0"

__all__ = [
    "BivariatePoly",
    "bernoulli",
    "faulhaber",
    "SeifertData",
    "enumerate_components",
    "predicted_expansion",
    "decompose_gluing",
    "sigma_s1_state",
    "z_k",
    "build_family",
    "fusion_count_oracle",
    "verlinde_number",
    "pm",
    "pm_inductive",
    "pm_recurrence",
    "xi_direct",
]
