"""Group backends: free groups, weighted Z^n, Z_m and graph products."""

from rdlab.groups.abelian import CyclicGroup, WeightedAbelianGroup
from rdlab.groups.base import Element, Group, LengthValue, exact
from rdlab.groups.config import config_digest, config_issues, group_from_config, load_group
from rdlab.groups.free import FreeGroup
from rdlab.groups.graph_product import GraphProduct, is_factorization, syllable_length


def multiply(a: Element, b: Element) -> Element:
    return a * b


def inverse(a: Element) -> Element:
    return ~a


def length(g: Element) -> LengthValue:
    return g.length


__all__ = [
    "CyclicGroup", "Element", "FreeGroup", "GraphProduct", "Group", "LengthValue",
    "WeightedAbelianGroup", "config_digest", "config_issues", "exact", "group_from_config",
    "inverse", "is_factorization", "length", "load_group", "multiply", "syllable_length",
]
