"""Surjective curves with prescribed continuity modulus onto discretized Peano continua."""
from .continuum import (Continuum, diameter, generate, interval, is_connected, load_bitmap,
                        neighborhood, sierpinski_carpet, sierpinski_gasket, square)
from .covers import (Cover, NestedCovers, SierpinskiTable, build_nested, exact_min_cover,
                     greedy_cover, sierpinski_table, star_saturate)
from .connectors import Chain, canonical_compare, minimal_connector, validate_chain
from .paths import ParamCurve, build_path, refine_chain
from .skeleton import GapRecord, Skeleton, build_skeleton, gap_records
from .assembler import HolderCurve, ModulusSpec, assemble, delta_sequence, epsilon_sequence, fill_gap
from .analysis import (DimensionReport, box_dim, empirical_modulus, estimate_sdim, holder_bound,
                       verify_certificate)
from .errors import PeanoError

__version__ = "0.1.0"
