"""Numerical toolkit for slowly varying functions, rearrangement-invariant
norms, weighted Hardy criteria and Besov embeddings of logarithmic smoothness."""

from .embed import (EmbeddingCase, EmbeddingReport, analyze, cgo2_condition,
                    empirical_embedding_constant, optimality_chain, sharpness_probe,
                    strictness_demo, theorem48_410_check)
from .hardy import (ConditionReport, KernelSpec, Weight, heinig_stepanov,
                    lai_forward_condition, lai_reverse_condition, ok_hardy_condition,
                    sawyer_conditions)
from .rearrange import RearrangementProfile, SampledFunction, k_functional, maximal, rearrange
from .spaces import NormSpec, besov_norm, lk_norm, modulus, z_norm
from .svfunc import DerivedSV, SVExpr, classify_integrability, make_bbar, make_btilde

__version__ = "0.1.0"

__all__ = [
    "ConditionReport", "DerivedSV", "EmbeddingCase", "EmbeddingReport", "KernelSpec",
    "NormSpec", "RearrangementProfile", "SVExpr", "SampledFunction", "Weight", "analyze",
    "besov_norm", "cgo2_condition", "classify_integrability", "empirical_embedding_constant",
    "heinig_stepanov", "k_functional", "lai_forward_condition", "lai_reverse_condition",
    "lk_norm", "make_bbar", "make_btilde", "maximal", "modulus", "ok_hardy_condition",
    "optimality_chain", "rearrange", "sawyer_conditions", "sharpness_probe",
    "strictness_demo", "theorem48_410_check", "z_norm",
]
