"""Size caps for table-based computations.

The caps keep exhaustive checks (associativity, cocycle identities,
exterior-square realizations) inside desk-scale budgets.
"""

# Largest group realized as an explicit multiplication table.
MAX_GROUP_ORDER = 4096

# Exterior-square input cap: the pair presentation has |G|^2 generators.
MAX_EXTSQ_SOURCE_ORDER = 32

# Largest |G| for bar-resolution cochain tables ((|G|-1)^(d+1) cells).
MAX_BAR_ORDER = 64

# Exhaustive associativity check only below this order (n^3 triples).
MAX_ASSOC_CHECK_ORDER = 256

# Default coset bound for Todd-Coxeter.
DEFAULT_MAX_COSETS = 100_000

# Densest bar-resolution differential tolerated as one dense matrix
# (rows x cols); larger instances either stream (field ranks) or raise.
MAX_BAR_CELLS = 20_000_000
