"""Desk-scale counting workbench.

Modules:
  arith       exact integer/rational primitives (factorization, roots, CRT)
  kfree       k-free pair and tuple counting, local densities, Euler products
  squarefull  square-full numbers, consecutive pairs, the 4n(n+1) recurrence
  pell        continued fractions, fundamental solutions, small-unit counts
  detmethod   dyadic-box point counts, interval certificates, lattices, lines
  analysis    exact exponent bookkeeping and log-log slope fitting
  cli         delimited reports and rendered figures for all of the above
"""

__version__ = "0.1.0"
