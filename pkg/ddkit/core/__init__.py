"""Numerical engines: sequences, spin-boson, finite bath, classical noise, state protection, order fits."""
