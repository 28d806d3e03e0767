"""Avoider-Enforcer game laboratory: board, strategies, solver and harness."""
