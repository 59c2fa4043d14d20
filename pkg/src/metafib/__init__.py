"""Spot-based generation structures of meta-Fibonacci sequences."""

from metafib.engine import SequenceTable, compose, evaluate, extend
from metafib.genseq import (GenerationPartition, GenerationSequence, SpotTrace, generation_sequence,
                            is_slow, partition, spot_trace)
from metafib.spec import RecursionSpec, parse_spec, render, spot_count

__all__ = [
    "GenerationPartition", "GenerationSequence", "RecursionSpec", "SequenceTable", "SpotTrace",
    "compose", "evaluate", "extend", "generation_sequence", "is_slow", "parse_spec", "partition",
    "render", "spot_count", "spot_trace",
]
