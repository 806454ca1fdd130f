"""Extremal cuts and local structure of configuration-model random graphs."""

__version__ = "0.1.0"

from cmcuts.graph import MultiGraph, read_edgelist, write_edgelist  # noqa: E402
from cmcuts.theory import DegreeDistribution  # noqa: E402
from cmcuts.generator import DegreeSequence, generate, sample_degree_sequence  # noqa: E402
from cmcuts.cuts import Partition  # noqa: E402

__all__ = [
    "__version__",
    "DegreeDistribution",
    "DegreeSequence",
    "MultiGraph",
    "Partition",
    "generate",
    "read_edgelist",
    "sample_degree_sequence",
    "write_edgelist",
]
