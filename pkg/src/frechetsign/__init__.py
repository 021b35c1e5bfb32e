"""Frechet distance decisions, simplification and query structures driven
by polynomial sign conditions."""

from .geometry import (PolygonalCurve, Point, Segment,
                       point_segment_distance, projection_parameter,
                       validate_curve)
from .polynomials import (CriticalValueSet, PolynomialId, PolynomialSet,
                          SignVector, critical_values, enumerate_ids,
                          eval_polynomial, polynomial_set,
                          predicate_from_signs, predicate_geometric,
                          sign_vector)
from .engine import (FrechetResult, FreeSpaceDecision, decide_frechet,
                     decide_from_sign_vector, decide_weak_frechet,
                     discrete_frechet_oracle, frechet_distance)
from .simplify import (SearchBudget, SimplificationResult, greedy_simplify,
                       min_error_simplify, min_size_simplify,
                       vertex_restricted_simplify)
from .arrangement import (CellSample, LinearForm, MonomialBasis,
                          SamplerConfig, VcReport, build_basis, lift,
                          linear_form, sample_cells, vc_counting_experiment)
from .index import (RangeIndex, SubcurveSpec, build_range_index, load_index,
                    materialize_subcurve, nearest_neighbor, range_query,
                    save_index, subcurve_distance)
from .curvefile import read_curves, write_curves

__version__ = "0.1.0"
