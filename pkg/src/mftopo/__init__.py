"""Maximal-filter spaces: finite posets, hybrid lattices, the interval
presentation of [0,1], metrization functionals and tree spaces."""

from .approx import ApproxReal
from .errors import (Deferred, DomainError, InputError, MFError, ParseError,
                     ResourceError, StructuralError, UnknownElementError, WitnessError)
from .order import (FinitePoset, enumerate_maximal_filters, extent, extent_of_set,
                    in_closure, is_filter, parse_poset, upward_closure)
from .hybrid import (ExtentHybrid, TableHybrid, finite_poset_upgrade,
                     is_maximal_filter_arithmetic, open_complement, parse_hybrid,
                     strong_regularity_witness, validate_axioms)
from .interval import FiniteUnion, IntervalSpace, PointCode, RatInterval
from .metrize import (DyadicChain, MetricFamily, diam_upper, dyadic_chain,
                      gdelta_witness_levels, metric_eval, nu, point_finite_refinement,
                      remetrize_gdelta, urysohn_eval)
from .classify import (clopen_basis_check, covers, is_discrete, is_normal, is_proper,
                       is_regular, is_strongly_regular)
from .trees import (PresentedTree, phi, star_cover_check, tree_discreteness,
                    tree_to_hybrid)
from .report import ClassReport, Verdict

__version__ = "0.1.0"
