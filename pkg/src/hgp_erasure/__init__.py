"""Erasure decoders for hypergraph-product quantum LDPC codes."""

__version__ = "0.1.0"
