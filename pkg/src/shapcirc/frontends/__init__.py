"""Readers and encoders for the supported input formats."""
from .bdd import Bdd, Internal, Leaf, check_free, encode_bdd, parse_bdd
from .formulas import CnfFormula, DnfFormula, encode_cnf3, encode_dnf, parse_cnf, parse_dnf
from .native import parse_circuit, render_circuit
from .nnf import parse_nnf
from .values import parse_entity, parse_probmap, parse_rational

__all__ = [
    "Bdd", "Internal", "Leaf", "check_free", "encode_bdd", "parse_bdd",
    "CnfFormula", "DnfFormula", "encode_cnf3", "encode_dnf", "parse_cnf", "parse_dnf",
    "parse_circuit", "render_circuit", "parse_nnf",
    "parse_entity", "parse_probmap", "parse_rational",
]
