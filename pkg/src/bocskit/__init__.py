"""Exact computations with endolength, ditalgebra reductions and
representation embeddings over finite fields."""

__version__ = "0.1.0"
