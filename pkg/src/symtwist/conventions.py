"""Frozen summation conventions shared by every brute-force enumeration.

The coset space of translations inside Gamma0(N) can be parametrized either
with or without the sign classes (-c, -d); the two choices rescale every sum
by 2.  All enumerators here walk the canonical single-sign family
{c > 0, all d} plus the identity coset, and multiply by COSET_MULTIPLICITY.
The value 2 is calibrated once, by matching the brute-force constant
Kloosterman sum against its closed form at s = 2 (acceptance criterion A4),
and is consistent with the factor 2 in the constant term of the completed
Eisenstein expansion at the infinite cusp (criterion A3).
"""

COSET_MULTIPLICITY = 2
