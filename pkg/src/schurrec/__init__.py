"""schurrec: exact computations with monobricks, left Schur subcategories and
idempotent recollements of bound quiver algebras over prime fields."""

__version__ = "0.1.0"
