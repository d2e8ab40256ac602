"""Arithmetic word problem solving with monotonic expression trees."""
from .corpus import GoldLabels, Problem, Quantity, Token, load_corpus, parse_problem
from .expr import LcaLabel, Leaf, Node, Op, evaluate, format_tree, lca_map, monotonize, parse_tree
from .infer import Constraint, InferenceConfig, beam_search, solve

__version__ = "0.1.0"
