"""Link concordance invariants from filtered perturbed sl(2) homology."""

__version__ = "0.1.0"
