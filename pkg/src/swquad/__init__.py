"""Quadratic-algebra spectra of the relativistic Smorodinsky-Winternitz systems."""
