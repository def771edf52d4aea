"""Central sections of generalized cylinders and the Bessel integral inequalities behind their bounds."""

from __future__ import annotations

__version__ = "0.1.0"

from .special import DomainError, EnvelopeKind, normalized_bessel, bessel_zeros  # noqa: E402
from .quad import QuadResult, ball_bessel_integral  # noqa: E402
from .sections import CylinderSpec, Direction, SectionResult, canonicalize, section_volume_fourier  # noqa: E402
from .extremal import maximal_section_3d, search_max_direction  # noqa: E402

__all__ = [
    "__version__",
    "DomainError",
    "EnvelopeKind",
    "normalized_bessel",
    "bessel_zeros",
    "QuadResult",
    "ball_bessel_integral",
    "CylinderSpec",
    "Direction",
    "SectionResult",
    "canonicalize",
    "section_volume_fourier",
    "maximal_section_3d",
    "search_max_direction",
]
