"""Boundaried hypergraph machinery: gluing, parse trees, cutwidth tests,
and a generalized hypertree width witness family."""

from .core import ColoredGraph, Hypergraph, InstanceTooLarge, incidence_graph, isomorphic, primal_graph

__all__ = ["ColoredGraph", "Hypergraph", "InstanceTooLarge", "incidence_graph", "isomorphic", "primal_graph"]
