"""Beta-Hermite ensembles, Tracy-Widom laws and infinite-divisibility tail checks."""

__version__ = "0.1.0"
