"""Exact SHAP-scores for deterministic and decomposable Boolean circuits."""
from .circuit import (And, Circuit, Const, Flags, Gate, Not, Or, Var, build_circuit, certify,
                      check_decomposable, check_deterministic_bruteforce, evaluate, truth_table)
from .engine import (ShapReport, expectation, h_uniform, model_count, shap_all, shap_product,
                     shap_uniform, ssat_profile)
from .transforms import condition, pad_features, prepare, rewrite_fanin2, smooth

__version__ = "0.1.0"

__all__ = [
    "And", "Circuit", "Const", "Flags", "Gate", "Not", "Or", "Var", "build_circuit", "certify",
    "check_decomposable", "check_deterministic_bruteforce", "evaluate", "truth_table",
    "ShapReport", "expectation", "h_uniform", "model_count", "shap_all", "shap_product",
    "shap_uniform", "ssat_profile",
    "condition", "pad_features", "prepare", "rewrite_fanin2", "smooth",
]
