"""Delay-outage analysis for noise-limited wireless edge networks that jointly
cache, compute, and communicate."""

from .analytics import (AsymptoticOutage, DelayPoint, OutageBounds,
                        asymptotic_outage_gt1, asymptotic_outage_lt1,
                        effective_snr, min_latency, outage, reference_outage,
                        task_success_prob)
from .bounds import (BoundPair, lemma1_logsum_bounds, lemma2_harmonic_bounds,
                     lemma3_zipf_mass_bounds)
from .errors import (BudgetInfeasible, DomainError, Edge3CError,
                     InfeasibleLatency, NoRoot, ParseError, TruncationError,
                     ValidationError, WrongBranch)
from .harness import (ExperimentSpec, RunRecord, emit_csv, load_spec, run)
from .mc import (OutageEstimate, TrialConfig, simulate_outage,
                 simulate_task_success, truncation_radius)
from .model import (DerivedParams, Popularity, SystemParams, derive,
                    partial_sum, validate_params, zipf)
from .policy import (CachingPolicy, RegimeReport, most_popular_policy,
                     optimal_policy, regime_breakpoints, regime_report,
                     uniform_policy)
from .variants import (BackhaulParams, HierarchicalResult,
                       backhaul_only_outage, cache_plus_backhaul_outage,
                       colocated_vs_distributed, hierarchical_optimize,
                       make_backhaul)

__version__ = "0.1.0"
