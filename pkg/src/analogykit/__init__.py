"""Analogical proportions, dissimilarity, and lazy learning.

Four objects of one domain stand in analogical proportion when "the
first is to the second as the third is to the fourth"; the analogical
dissimilarity quantifies how far a 4-tuple is from that relation and is
zero exactly on proportions.  The package covers:

* bits, binary feature vectors, finite sets and real vectors
  (:mod:`analogykit.core`);
* sequences over a finite alphabet, via optimal 4-way alignment, with
  generalized equation solving that returns every best approximate
  solution as a DAG (:mod:`analogykit.sequences`);
* exact k-best triple retrieval against a query, exhaustive or pruned
  with pivot couples (:mod:`analogykit.search`);
* the (weighted) analogical-proportion classifier and its evaluation
  harness (:mod:`analogykit.classify`, :mod:`analogykit.dataio`).
"""

from .core import (binary_ad, is_analogy, real_ad, solve_binary_feature,
                   solve_bitvector_equation, solve_real_equation,
                   solve_set_equation, vector_ad)
from .alphabet import Alphabet, load_alphabet
from .sequences import (Alignment4, SolutionDag, alignment_cost,
                        enumerate_solutions, export_dag, is_sequence_analogy,
                        sequence_ad, sequence_ad_cost, solve_sequence_equation)
from .search import (BasePrototypes, CoupleIndex, ItemStore, SearchResult,
                     brute_force_search, build_index, fadana_search,
                     select_base_prototypes)
from .classify import (Decision, DecisionConfig, LabeledDataset, WeightMatrix,
                       decide, evaluate, learn_weight_matrix, rank_triples,
                       solve_class_equation, weighted_ad)
from .dataio import (EncodingMap, FeatureSchema, RawTable, encode,
                     infer_schema, parse_csv, stratified_split)

__version__ = "0.1.0"

__all__ = [
    "binary_ad", "vector_ad", "solve_binary_feature",
    "solve_bitvector_equation", "solve_set_equation", "real_ad",
    "solve_real_equation", "is_analogy",
    "Alphabet", "load_alphabet",
    "Alignment4", "SolutionDag", "alignment_cost", "sequence_ad",
    "sequence_ad_cost", "is_sequence_analogy", "solve_sequence_equation",
    "enumerate_solutions", "export_dag",
    "ItemStore", "BasePrototypes", "CoupleIndex", "SearchResult",
    "brute_force_search", "select_base_prototypes", "build_index",
    "fadana_search",
    "LabeledDataset", "WeightMatrix", "DecisionConfig", "Decision",
    "solve_class_equation", "learn_weight_matrix", "weighted_ad",
    "rank_triples", "decide", "evaluate",
    "RawTable", "FeatureSchema", "EncodingMap", "parse_csv", "infer_schema",
    "encode", "stratified_split",
]
