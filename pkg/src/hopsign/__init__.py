"""Spectra of random hopping-sign tridiagonal operators.

The operators are bi-infinite tridiagonal matrices with zero diagonal,
unit superdiagonal, and subdiagonal entries c_n drawn from {+sigma, -sigma}.
This package computes and cross-checks their spectra along several
independent routes: sequence square-root maps (Gamma_plus and friends),
transfer-matrix classification of periodic words, exact integer polynomial
identities for the special sign sequence c-tilde, a self-contained dense
complex eigensolver, and Bloch-decomposition unions over twisted periodic
matrices.
"""

__version__ = "0.1.0"

from . import seqcore, polyalg, transfer, eigen, spectra  # noqa: F401
