"""Local cohomology of monomial ideals: windowed modules, Bass and Lyubeznik
numbers, dimension filtrations and ambient reduction."""

__version__ = "0.1.0"

from .linalg import QQ, ScalarField
from .monomial import MonomialIdeal, PolyRingContext
from .cech import AmbientQuotient, WindowedModule, windowed_module, annihilator, cohomological_dimension
from .bass import bass_numbers
from .lyubeznik import LyubeznikTable, lyubeznik_table
from .resolutions import betti_numbers, depth_pair
from .seqcm import dimension_filtration, is_partially_scm, is_sequentially_cm
from .reduction import reduce

__all__ = [
    "QQ",
    "ScalarField",
    "MonomialIdeal",
    "PolyRingContext",
    "AmbientQuotient",
    "WindowedModule",
    "windowed_module",
    "annihilator",
    "cohomological_dimension",
    "bass_numbers",
    "LyubeznikTable",
    "lyubeznik_table",
    "betti_numbers",
    "depth_pair",
    "dimension_filtration",
    "is_partially_scm",
    "is_sequentially_cm",
    "reduce",
]
