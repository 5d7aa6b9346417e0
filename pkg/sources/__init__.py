from .core import Instance, RainbowCertificate, validate_instance, check_certificate, encode, decode
from .search import SearchBudget, SearchStatus, StrongStatus, find_rainbow, check_strong_property, exact_value_search
from .finder import find_rainbow_constructive
from .multilinear import rainbow_via_multilinear, multilinear_rainbow_find
from .probfield import choose_prime, behrend_system, build_partite_family, probabilistic_f_construction
from .bounds import bounds_report

__all__ = ["Instance", "RainbowCertificate", "validate_instance", "check_certificate", "encode", "decode",
           "SearchBudget", "SearchStatus", "StrongStatus", "find_rainbow", "check_strong_property",
           "exact_value_search", "find_rainbow_constructive", "rainbow_via_multilinear",
           "multilinear_rainbow_find", "choose_prime", "behrend_system", "build_partite_family",
           "probabilistic_f_construction", "bounds_report"]
