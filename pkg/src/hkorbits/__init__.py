"""Nilpotent orbits, invariant hyperKahler potentials and their numerical verification."""
