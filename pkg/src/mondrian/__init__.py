"""Mondrian tilings: exact minimum-defect search, the divisor-criterion
filter for equal-area tilings, and rough-number censuses at desk scale."""

from .census import (
    CENSUS_CSV_HEADER,
    EULER_GAMMA,
    CensusRecord,
    OeisComparison,
    OeisSeries,
    TheoremReport,
    census_csv_row,
    census_json_dict,
    compare_oeis,
    load_bfile,
    run_chain_census,
    theorem_report,
)
from .errors import BFileParseError, BudgetExceededError, InternalConsistencyError
from .numtheory import (
    FactorTable,
    WitnessReport,
    build_factor_table,
    census_excess_tau,
    compute_z,
    divisors,
    is_rough,
    mertens_product,
    rough_count,
    tau,
    tau_of_square,
    tau_summatory,
    witness_report,
)
from .tiling import (
    PerfectCheckOutcome,
    PerfectVerdict,
    Placement,
    Rect,
    Tiling,
    VerificationReport,
    canonical_rect,
    check_perfect,
    enumerate_piece_sets,
    exact_cover_tile,
    rects_with_area,
    scale_tiling,
    solve_m,
    tiling_from_json,
    tiling_to_json,
    verify_tiling,
)

__version__ = "0.1.0"
