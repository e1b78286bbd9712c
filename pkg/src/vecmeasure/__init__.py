"""Ranges, maximal subsets and purification for two-dimensional vector measures."""
__version__ = "0.1.0"

from .errors import (CertificationFailed, Infeasible, InvalidKernel, NonEquivalent,
                     NotInRange, OutOfRange, TooLarge, VecMeasureError)
from .geometry import ConvexRegion, hausdorff, minkowski_sub, minkowski_sum
from .intervals import IntervalSet
from .levels import (LevelProfile, g_value, level_profile, lower_set, quantile_l, slab,
                     solve_a_star)
from .measure import BasisChange, PiecewisePoly, VectorMeasure, ensure_equivalent, measure_of
from .ranges import (RangeResult, compute_range, lower_boundary, maximal_subset, minimal_subset,
                     q_set, range_of_subset)
from .counterexample import CertificateReport, certify_counterexample
from .purification import (TargetAllocation, TransitionKernel, check_conditions, kernel_targets,
                           purify, verify_partition)
