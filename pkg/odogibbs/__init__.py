from __future__ import annotations

from typing import Final, Tuple

from .exactnum import DyadicRational, DyadicInterval, RealInterval
from .odometer import OdometerPoint, Residue, BitStream, sample_point, derive_seed
from .coding import Family, q_coefficient, b_m_count_enumerated, orbit_letters, point_letter, transition_index
from .language import LanguageTable, Word, Decomposition, build_language, contains, count_words, maximal_decompose
from .measure import MeasureResult, WindowEvent, event_measure, mu_cylinder, nu_A_series, monte_carlo_cylinder

from .schedule import DepthSchedule
from .pool import WorkerPool
from .result import Result
from .enums import Errors, Commands, Containment, Letter, OutputFormat, Side

from .formats import Serializer, Deserializer, Reader, SupportedTypes
from .config import RunConfig
from .report import Report
from .session import Session


__all__: Final[Tuple[str, ...]] = (
    "DyadicRational",
    "DyadicInterval",
    "RealInterval",
    "OdometerPoint",
    "Residue",
    "BitStream",
    "sample_point",
    "derive_seed",
    "Family",
    "q_coefficient",
    "b_m_count_enumerated",
    "orbit_letters",
    "point_letter",
    "transition_index",
    "LanguageTable",
    "Word",
    "Decomposition",
    "build_language",
    "contains",
    "count_words",
    "maximal_decompose",
    "MeasureResult",
    "WindowEvent",
    "event_measure",
    "mu_cylinder",
    "nu_A_series",
    "monte_carlo_cylinder",
    "DepthSchedule",
    "WorkerPool",
    "Result",
    "Errors",
    "Commands",
    "Containment",
    "Letter",
    "OutputFormat",
    "Side",
    "Serializer",
    "SupportedTypes",
    "Deserializer",
    "Reader",
    "RunConfig",
    "Report",
    "Session",
    "__version__",
)

__version__: Final[str] = "0.1.0"
