"""Exact mixed multiplicities of good filtrations of monomial ideals."""
