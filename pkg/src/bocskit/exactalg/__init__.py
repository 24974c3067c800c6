"""Finite fields, exact linear algebra and structure-constant algebras."""

from .fields import GF, FqTower, gf, FieldError
from .linalg import Matrix, Solution, solve_linear, LinAlgError, CapError
