"""qamlib: quasi-arithmetic means and averages, the dually flat geometry
they induce, SPD matrix means, and quasi-arithmetic statistical mixtures.

The library is organized around generator bundles (strictly convex
potentials with globally invertible gradient maps); everything else —
averages, divergences, geodesics, centroids, mixtures — is built on top
of them.  See the README for the module map and the ``qam`` command-line
interface.
"""

from .averages import (
    ScalarMeanSpec,
    WeightVector,
    custom_mean_spec,
    dual_qaa,
    lse_mean_spec,
    power_mean,
    power_mean_spec,
    qaa,
    scalar_qam,
    weighted_sum,
)
from .divergences import (
    DivergenceReport,
    bregman,
    divergence_report,
    fenchel_young,
    jeffreys_bregman,
    jensen,
    jensen_diversity,
    mn_convexity_test,
    mn_jensen,
)
from .dually_flat import (
    BarycenterTrace,
    DfsPoint,
    dual_geodesic_point,
    jensen_barycenter,
    left_centroid,
    lift_dual,
    lift_point,
    primal_geodesic_point,
    right_centroid,
)
from .errors import (
    ConvergenceError,
    DomainError,
    DomainEscapeError,
    DualDomainError,
    InfiniteDivergenceError,
    QamError,
    ValidationError,
)
from .generators import (
    Generator,
    GeneratorSpec,
    MixtureFamily,
    ScalarGenerator,
    affine_reparam,
    build_generator,
    exp_scalar,
    half_trace_square_generator,
    inner,
    legendre_conjugate,
    lse0_generator,
    mixture_negentropy_generator,
    neg_log_det_generator,
    power_generator,
    power_scalar,
    quadratic_generator,
    separable_generator,
)
from .mixtures import (
    AlphaGeodesicConfig,
    DiscreteDensity,
    alpha_divergence,
    alpha_geodesic_path,
    alpha_geodesic_point,
    alpha_mixture,
    categorical_density,
    cauchy_harmonic_mixture_residual,
    cauchy_harmonic_scale,
    cross_entropy,
    generalized_jsd,
    hjsd,
    jsd,
    kl,
    mixture_family_jsd_identity,
    nabla_alpha_jsd,
    qamix,
    shannon_entropy,
)
from .spd import (
    AhmTrace,
    SpdMatrix,
    ahm_geometric,
    spd_arith_mean,
    spd_geometric_closed,
    spd_harmonic_mean,
    spd_sqrt,
    trace_metric_distance,
)

__version__ = "0.1.0"
