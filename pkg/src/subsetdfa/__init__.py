"""Pseudo-minimal and minimal DFAs for dictionaries of subset-strings.

A subset-string has a set of admissible symbols at every position; a
simple query string matches it when every query symbol lies in the set at
its position and the lengths agree.  The automata built here answer
membership (does any string match?) and retrieval (which strings match?)
in time linear in the query length, without expanding the dictionary.
"""

from .builder import BuildBudgetExceeded, Registry, alpha_estimate, build_automaton, partition
from .core import (
    MAX_SIGMA,
    Automaton,
    Dictionary,
    DictionaryError,
    EquivKey,
    State,
    full_mask,
    symbol_set,
    symbols_of,
    validate_dictionary,
)
from .formats import (
    FormatError,
    format_automaton,
    format_dictionary,
    parse_automaton,
    parse_dictionary,
    read_automaton,
    read_dictionary,
    write_automaton,
    write_dictionary,
)
from .gen import (
    InstanceParams,
    generate_delta_instance,
    generate_instance,
    generate_wildcard_instance,
    mean_subset_size,
)
from .matcher import (
    QueryError,
    brute_force_match,
    count_accepted_strings,
    delta_star,
    depth_histogram,
    enumerate_dprime,
    match_membership,
    match_membership_many,
    match_retrieve,
    match_retrieve_many,
)
from .minimizer import equivalent_languages, minimize

__all__ = [
    "MAX_SIGMA",
    "Automaton",
    "BuildBudgetExceeded",
    "Dictionary",
    "DictionaryError",
    "EquivKey",
    "FormatError",
    "InstanceParams",
    "QueryError",
    "Registry",
    "State",
    "alpha_estimate",
    "brute_force_match",
    "build_automaton",
    "count_accepted_strings",
    "delta_star",
    "depth_histogram",
    "enumerate_dprime",
    "equivalent_languages",
    "format_automaton",
    "format_dictionary",
    "full_mask",
    "generate_delta_instance",
    "generate_instance",
    "generate_wildcard_instance",
    "match_membership",
    "match_membership_many",
    "match_retrieve",
    "match_retrieve_many",
    "mean_subset_size",
    "minimize",
    "parse_automaton",
    "parse_dictionary",
    "partition",
    "read_automaton",
    "read_dictionary",
    "symbol_set",
    "symbols_of",
    "validate_dictionary",
    "write_automaton",
    "write_dictionary",
]
