"""Complex Bessel kernels and Weber-Schafheitlin integrals."""
__version__ = "0.1.0"
