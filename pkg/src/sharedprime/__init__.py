"""RSA moduli whose second prime is derived from the first, q = f(p, k).

Two moduli built this way either share no factor or are identical, so a
weak random number generator can no longer hand out moduli that a single
gcd breaks.
"""

__version__ = "0.1.0"
