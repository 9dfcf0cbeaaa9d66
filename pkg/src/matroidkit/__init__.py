"""matroidkit: exact matroid computations over partial fields.

Kernel backend in use is reported by `matroidkit.KERNEL_BACKEND`.
"""

from ._kernel import BACKEND as KERNEL_BACKEND
from .matroid import Matroid, from_bases, has_minor, is_isomorphic, canonical_form
from .pfield import partial_field

__all__ = [
    "KERNEL_BACKEND",
    "Matroid",
    "from_bases",
    "has_minor",
    "is_isomorphic",
    "canonical_form",
    "partial_field",
]

__version__ = "0.1.0"
