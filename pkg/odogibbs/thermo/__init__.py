from typing import Final, Tuple

from .gibbs import GibbsReport, gibbs_ratio_at_o
from .lemmas import LemmaLimits, LemmaRow, lemma_report
from .orbit import OrbitStructure, orbit_structure
from .partition import N_MAX, N_MAX_LARGE, block_sums, check_cost, partition_sum_Qn, partition_sum_Qnl, pressure, qnl_table
from .potential import ExtensionConvention, PotentialParams, birkhoff_psi, psi_at, psi_terms, window_radius
from .scan import ProxyRow, ScanReport, ScanRow, ergodicity_proxy, short_words, very_weak_scan

__all__: Final[Tuple[str, ...]] = (
    "N_MAX",
    "N_MAX_LARGE",
    "ExtensionConvention",
    "GibbsReport",
    "LemmaLimits",
    "LemmaRow",
    "OrbitStructure",
    "PotentialParams",
    "ProxyRow",
    "ScanReport",
    "ScanRow",
    "birkhoff_psi",
    "block_sums",
    "check_cost",
    "ergodicity_proxy",
    "gibbs_ratio_at_o",
    "lemma_report",
    "orbit_structure",
    "partition_sum_Qn",
    "partition_sum_Qnl",
    "pressure",
    "psi_at",
    "psi_terms",
    "qnl_table",
    "short_words",
    "very_weak_scan",
    "window_radius",
)
