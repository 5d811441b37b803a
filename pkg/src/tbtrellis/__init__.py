"""Linear tail-biting trellises over prime fields."""

from .field_linalg import Field, Subspace
from .spans import Span, SpanDistribution
from .trellis_core import Trellis, cover, dual_f2, elementary, product, product_all, shift, trim, unlabel

__version__ = "0.1.0"

__all__ = [
    "Field",
    "Subspace",
    "Span",
    "SpanDistribution",
    "Trellis",
    "elementary",
    "product",
    "product_all",
    "shift",
    "cover",
    "trim",
    "dual_f2",
    "unlabel",
]
