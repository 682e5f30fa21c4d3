"""Partial ovoids and tangent-sets of finite symplectic and Hermitian polar spaces.

Constructions live in :mod:`cubic`, :mod:`w5`, :mod:`pencil` and :mod:`lift`;
independent oracles in :mod:`verify`.  Set ``POLARSET_NUMBA=0`` to run the
scan kernels on the pure numpy path.
"""

from .forms import PolarSpace, SesquiForm
from .gf import FieldSpec, field_of_order, make_field
from .pointset import PointSet
from .verify import VerificationReport

__version__ = "0.1.0"

__all__ = [
    "FieldSpec",
    "PointSet",
    "PolarSpace",
    "SesquiForm",
    "VerificationReport",
    "field_of_order",
    "make_field",
]
