"""Exact tensorial algebra for the Goldman Lie algebra and Johnson homomorphisms."""
