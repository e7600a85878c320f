"""Min-max-min robust binary optimization toolkit.

Prepare k feasible solutions so that, whatever cost scenario the uncertainty
set produces, the best of the k performs well: exact branch & bound for any
k, a polynomial-time approximation with certified additive/multiplicative
guarantees, and closed-form calculators for the policy counts needed by
k-adaptability schemes.
"""

from .approx import ApproxResult, approximate, evaluate
from .bnb import (
    BnbConfig,
    InfeasibleInstanceError,
    SolveResult,
    SolveStats,
    branch_select,
    brute_force,
    canonical_key,
    node_heuristic,
    solve,
)
from .core import (
    BinarySolution,
    ConvexPoint,
    DimensionMismatch,
    FixationSet,
    ProblemInstance,
    Scenario,
    SolutionTuple,
    dot,
    mix,
)
from .guarantees import (
    GuaranteeCertificate,
    GuaranteeProfile,
    SupportFunc,
    additive_bound,
    big_m,
    kadapt_policies,
    m_tilde,
    max_l_additive,
    min_q_multiplicative,
    multiplicative_bound,
    n_threshold,
    profile_catalog,
)
from .instances import (
    KnapsackInstance,
    ShortestPathInstance,
    gen_knapsack,
    gen_shortest_path,
    load,
    save,
)
from .lower_bound import (
    HullResult,
    InfeasibleSlotError,
    IterationLimitError,
    LowerBoundReport,
    lower_bound,
    solve_convex_hull,
)
from .lp import LinearProgram, LpSolution, NumericalError, SimplexLimitError, solve_lp
from .oracles import (
    ExplicitOracle,
    KnapsackOracle,
    OracleAnswer,
    OracleQuery,
    ShortestPathOracle,
    enumerate_feasible,
    minimize,
)
from .uncertainty import BudgetedSet, PolytopeSet, scenario_bounds, worst_case

__version__ = "0.1.0"
