"""Splice diagrams, orbifold plumbings and the congruence condition."""

from .diagrams import PlumbingGraph, SpliceDiagram, parse, serialize
from .plumbing import extract_splice, homology
from .splice import check_conditions

__all__ = ["PlumbingGraph", "SpliceDiagram", "parse", "serialize", "extract_splice", "homology",
           "check_conditions"]
