"""Sp_2l realization of Chevalley groups of types B and C, and carpet subgroups inside them."""

from .bruhat import BruhatForm, bruhat_decompose, check_form, form_from_json, recompose, unipotent_coordinates
from .finite import AxiomReport, SL2Report, bn_verify, mixed_carpet, sl2_enumerate
from .matrices import GroupElement, GroupError, gen_matrix, nw_matrix, torus_matrix, weyl_rep_matrix
from .membership import (
    MEMBER,
    NOT_MEMBER,
    TORUS_UNDETERMINED,
    MembershipVerdict,
    carpet_membership,
    closure_experiment,
)
from .perfectness import perfectness_certificates
from .relations import frobenius_roundtrip_check, symbol_check, symbol_image, verify_relations
from .words import RootElt, Torus, WeylRep, Word, apply_morphism, element, parse_word, phi, psi, word_matrix

__all__ = [
    "AxiomReport", "BruhatForm", "GroupElement", "GroupError", "MEMBER", "MembershipVerdict",
    "NOT_MEMBER", "RootElt", "SL2Report", "TORUS_UNDETERMINED", "Torus", "WeylRep", "Word",
    "apply_morphism", "bn_verify", "bruhat_decompose", "carpet_membership", "check_form",
    "closure_experiment", "element", "form_from_json", "frobenius_roundtrip_check", "gen_matrix",
    "mixed_carpet", "nw_matrix", "parse_word", "perfectness_certificates", "phi", "psi", "recompose",
    "sl2_enumerate", "symbol_check", "symbol_image", "torus_matrix", "unipotent_coordinates",
    "verify_relations", "weyl_rep_matrix", "word_matrix",
]
