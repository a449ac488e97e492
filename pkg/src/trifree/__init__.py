"""Triangle-free, K_{s,t}-free graphs of diameter two: checkers, constructions and searches."""

from .graph import Graph, from_graph6, to_graph6
from .properties import is_witness, witness_report

__all__ = ["Graph", "from_graph6", "to_graph6", "is_witness", "witness_report"]
__version__ = "0.1.0"
