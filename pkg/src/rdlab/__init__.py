"""Exact finite experiments on the Rapid Decay property of groups."""

__version__ = "0.1.0"

from rdlab.analysis import (Cube, ExpansionReport, Polynomial, ScanReport,
                            cauchy_schwarz_functional, counterexample_demo,
                            folner_cube_search, rapid_expansion_check, rd_scan)
from rdlab.centroid import (CentroidMap, CliqueFactorization, CountReport, RelativeCentroidMap,
                            clique_factorize, graph_product_rc, median_map, product_centroid,
                            tree_median, verify_c1, verify_c2, verify_c3, verify_rc, verify_rc4)
from rdlab.convolution import (NormEstimate, SparseFunction, TripleSet, convolve, l2_norm,
                               operator_norm_estimate, propagation, rd_ratio, relative_convolve)
from rdlab.enumeration import Ball, ProductTable, ball, product_set, sphere
from rdlab.errors import (BackendMismatch, BudgetExceeded, ConfigError, ContractError,
                          EmptySupport, NotAFactorization, RDLabError, WrongBackend)
from rdlab.groups import (CyclicGroup, Element, FreeGroup, GraphProduct, Group,
                          WeightedAbelianGroup, config_digest, group_from_config, inverse,
                          is_factorization, length, load_group, multiply, syllable_length)

__all__ = [name for name in dir() if not name.startswith("_")]
