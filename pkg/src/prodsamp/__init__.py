"""Sampling and perfect recovery of bandlimited graph signals on product graphs.

The pipeline works entirely on the small factor graphs: spectra, sampling
sets and recovery operators are computed per factor and composed
implicitly, so nothing of the product graph's full size is ever formed
outside of test oracles.
"""

from .errors import (
    BadParamError,
    ConfigError,
    DimensionMismatchError,
    DuplicateNodeError,
    EmptySupportError,
    InfeasibleError,
    MissingNodeError,
    NonSquareError,
    NotSymmetricError,
    NumericalFailureError,
    OutOfRangeError,
    OversampledPlanError,
    ParseError,
    ProdsampError,
    RankDeficientError,
    TooLargeError,
)
from .graphs import (
    DEFAULT_DENSE_CAP,
    Graph,
    ProductGraph,
    ProductKind,
    flat_index,
    make_graph,
    materialize,
    product_graph,
    tuple_index,
)
from .kernels import backend_name
from .product_sampling import (
    ProductSamplingPlan,
    build_product_plan,
    flat_sample_indices,
    kron_apply,
    product_plan_from_sample_sets,
    product_reconstruct,
    product_sample,
    product_sample_set,
    project_support,
    sampled_product_shift,
)
from .sampling import (
    SampledGraph,
    SamplingPlan,
    SupportSet,
    build_plan,
    reconstruct,
    sample,
    sampled_graph,
    select_sample_set,
)
from .signals import BandlimitedSignal, random_graph, relative_error, synthesize
from .spectral import (
    ProductSpectrum,
    Spectrum,
    eigendecompose,
    eigenvalue_table,
    gft,
    igft,
    order_frequencies,
    product_eigenvalue,
    product_eigenvector,
    product_spectrum,
)

__version__ = "0.1.0"
