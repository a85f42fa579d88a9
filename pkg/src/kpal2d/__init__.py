"""Maximal k-mismatch square and rectangular 2D palindromes."""
