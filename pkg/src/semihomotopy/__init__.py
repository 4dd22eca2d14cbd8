"""Semi-open sets, so-i continuity and step-path semi-homotopy on finite spaces."""

from .finite_space import E1, SIERPINSKI, FiniteSpace, SpaceError, all_spaces, enumerate_topologies
from .fundamental_group import LoopTable, equivalent, multiply, parse_word, realize, register_loop
from .homotopy import Certificate, CertificateError, check_certificate, verify_slices
from .interval_sets import Interval, RatSet, parse_ratset
from .maps import SpaceMap, classify, classify_via_closed, search_counterexample
from .paths import PLMap, StepPath, is_so_i_path, path_connectivity, pl_continuity_class, reparameterize

__all__ = [
    "E1", "SIERPINSKI", "FiniteSpace", "SpaceError", "all_spaces", "enumerate_topologies",
    "LoopTable", "equivalent", "multiply", "parse_word", "realize", "register_loop",
    "Certificate", "CertificateError", "check_certificate", "verify_slices",
    "Interval", "RatSet", "parse_ratset",
    "SpaceMap", "classify", "classify_via_closed", "search_counterexample",
    "PLMap", "StepPath", "is_so_i_path", "path_connectivity", "pl_continuity_class", "reparameterize",
]
