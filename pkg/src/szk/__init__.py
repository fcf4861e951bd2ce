"""Exact symbolic toolkit for abelian groups given by Szmielew data."""

from .core import (INFINITE, OMEGA, Div, Index, PPFormula, PrimeTailShape,
                   SzmielewDescription, TailSpec, Tor, direct_sum, div,
                   make_description, make_prime_tail, tor, validate)
from .dsl import (ParseError, SourceSpan, parse_formula, parse_group, render,
                  render_formula, render_group)
from .normalize import (DerivedSets, InvariantReport, derived_sets,
                        invariants, is_equivalent, normalize)
from .ppeval import (ProfileStats, SubgroupProfile, eval_formula, index_class,
                     meet, profile_stats)
from .rank import (Classification, RankReport, VcReport, WitnessFamily,
                   classify, dp_rank, gap_count, seed_witnesses, vc_density)
from .oracle import (BreadthResult, InpVerdict, PoolOverflowError,
                     breadth_search, candidate_pool, verify_inp)
from .shatter import (FinAbGroup, SetFamily, coset_family, shatter_function,
                      subgroup_members, vc_dim)

__version__ = "0.1.0"
