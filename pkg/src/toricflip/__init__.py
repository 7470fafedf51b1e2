"""Primitive relations, blow-ups and anti-flips of smooth projective toric
varieties, with a brute-force fan oracle to check every step."""

from .lattice import LatticePoint, det, solve_nonneg, in_relative_interior, lp_feasible, Constraint
from .presentation import (FanPresentation, PrimitiveRelation, PresentationError, validate,
                           fano_degree, is_fano)
from .transforms import FlipSpec, TransformError, blow_up, blow_down, star_flip
from .oracle import (ConeComplex, OracleError, reconstruct, check_smooth_complete, recompute,
                     check_projective, verify)
from .mori import CycleClass, cycle_class, is_extremal, classify
from .constructions import (ConstructionReport, ConstructionError, projective_space,
                            blowup_at_points, antiflip_schedule, run_construction,
                            predicted_flip_count, stage_relations)

__version__ = "0.1.0"
