"""Bures and Hilbert-Schmidt volumes of sets of quantum states.

Exact volumes of the full state body, explicit two-sided bounds relating
Bures and Hilbert-Schmidt volumes of arbitrary subsets, and seeded Monte
Carlo estimates of volume radii for PPT states and the bodies ``K_t`` and
``K^t``.
"""

from .errors import DomainError, NumericError, QGeomError, UnsupportedError, ValidationError

__version__ = "0.1.0"

__all__ = ["DomainError", "NumericError", "QGeomError", "UnsupportedError", "ValidationError", "__version__"]
