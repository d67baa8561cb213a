"""Exact-arithmetic toolkit for piecewise-linear interval dynamics.

Decides commutation and strong commutation of PL self-maps of [0,1],
enumerates hats and endpoints of the set-valued composition graphs,
computes invariant-interval decompositions and common fixed points of
strongly commuting pairs, and topological entropy.
"""

from .core import (DEFAULT_BREAKPOINT_CAP, CriticalSet, FixedSet, FULL,
                   Interval, PLMap, Rational, compose, conjugate,
                   identity_map, interval, iterate, make_plmap, rat, tent)
from .decompose import (BlockInfo, Decomposition, PrimaryValues,
                        RestrictionInfo, common_fixed_point, decompose,
                        orientation, primary_critical_values,
                        split_common_fixed, verify_decomposition)
from .entropy import (LapSequence, MarkovData, entropy_lap, entropy_markov,
                      entropy_setvalued, lap, markov_partition)
from .errors import (DomainError, IcmError, InternalInvariantError,
                     NotFoundError, ParseError, PreconditionError,
                     ResourceError)
from .oracle import GridSample, brute_force_strong_commute, sample_pullback
from .pwl import dump_map_text, parse_map_text, read_map, write_map
from .setvalued import (GraphFeature, Profile, Segment, SegmentSet, commute,
                        endpoints, forward_graph, forward_polyline,
                        graphs_equal, hats, profile, pullback_graph,
                        segment_set, strongly_commute,
                        verify_strong_consequences)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
