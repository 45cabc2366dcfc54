"""Heights, periodicity and Green functions of regular polynomial plane
automorphisms defined over the rational function field Q(t)."""

from .errors import (
    BadParameter,
    ConfigError,
    DegreeCapExceeded,
    InsufficientGrid,
    NearBadParam,
    NotACycle,
    NotRegular,
    ParseError,
    ResultantDegenerate,
    Unresolved,
)
from .family import (
    AffineFactor,
    HenonFactor,
    RegularFamily,
    compose,
    family_from_config,
    henon,
    parse_point,
    specialize,
    validate_regular,
)
from .green import (
    Chart,
    EscapeParams,
    GreenGrid,
    bif_mass,
    escape_radius,
    green_marked,
    green_plus,
    stability_probe,
)
from .heights import (
    arithmetic_degree,
    canonical_height,
    canonical_height_minus,
    canonical_height_plus,
    height_report,
    kawaguchi_gap,
    orbit_degrees,
)
from .northcott import cycle_multiplier, detect_periodic, fixed_points, nonisotriviality_certificate
from .parsing import parse_bivariate, parse_ratfunc
from .points import PointK, homogenize, naive_height
from .ratfunc import RatFunc
from .unipoly import UniPoly, poly_gcd, poly_resultant

__version__ = "0.1.0"
