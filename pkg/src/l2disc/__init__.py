"""L2-discrepancy of planar point sets, Haar decomposition and lower-bound constants."""

from .errors import ConsistencyError, DomainError, PointParseError, SizeLimitError
from .pointset import Point2, PointSet, fibonacci_lattice, hammersley, load, random_uniform, save
from .discrepancy import discrepancy_at, l2_oracle, l2_squared, normalized_ratio
from .haar import DyadicBox, DyadicShape, mu, mu_general_shape, mu_point, parseval_partial, quarter_of
from .census import hm_rhs, level_census, master_rhs, master_terms, rho_bundle, shape_census
from .bounds import delta, gamma, h_of, hm_corrected, theorem_constants

__version__ = "0.1.0"
