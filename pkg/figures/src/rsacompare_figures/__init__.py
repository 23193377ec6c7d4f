"""Figure panels for the simulation and empirical comparison CSV outputs.

This package consumes only the summary.csv / results.csv contract; it never
imports the package that produced them.
"""

__version__ = "0.1.0"
