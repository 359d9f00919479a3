"""Exact voting-event probabilities under the Impartial Anonymous Culture model."""

__version__ = "0.1.0"
