"""Random lattices in the plane: distances to the square and rectangular
lattices on the modular surface, their distributions, and the tools to
sample and check them."""

from .hyperbolic import HPoint, I, MoebiusMap, dist_h2
from .modular import reduce, quotient_dist_to_rect, quotient_dist_to_square
from .closed_forms import DENSITIES, cdf_square_distance, moments, pdf_square_distance
from .sampler import SamplerConfig, sample_rejection, sample_uniform

__version__ = "0.1.0"
