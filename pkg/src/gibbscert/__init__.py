"""gibbscert: construction, certification, and coherence-cost bounds for
Gibbs-preserving quantum operations.

The package is organized bottom-up:

* :mod:`gibbscert.linalg` - dense complex matrix kernel,
* :mod:`gibbscert.quantum` - systems, states, Gibbs states, scalar
  quantities (fidelity, purified distance, QFI, min/max relative entropy),
* :mod:`gibbscert.channels` - Kraus/Choi channels, dual maps, dilations,
  Gibbs-preservation and covariance predicates,
* :mod:`gibbscert.constructions` - factories for the explicit channels,
  state pairs, and dilations the toolkit certifies,
* :mod:`gibbscert.certify` - the off-diagonal energy-change value C,
  irreversibility delta, channel purified distance, and the coherence-cost
  bound curves,
* :mod:`gibbscert.runner` / :mod:`gibbscert.cli` - scenario files, batch
  certification, CSV reports.
"""

from .quantum import (
    DensityOperator,
    PureState,
    SystemSpec,
    d_max,
    d_min,
    fidelity,
    gibbs_state,
    gibbs_weights,
    purified_distance,
    qfi,
    spectral_spread,
)
from .channels import (
    Dilation,
    QuantumChannel,
    channel_from_dilation,
    choi,
    compose,
    energy_conservation_defect,
    is_covariant,
    is_gibbs_preserving,
    kraus_from_choi,
    tensor_with_identity,
    validate,
)
from .constructions import (
    ConstructionResult,
    ReversiblePair,
    appendix_e_dilations,
    coherent_measurement_channel,
    corollary_inputs,
    faist_channel,
    general_pairwise_channel,
    proposition_channel,
    state_transition_channel,
    tightness_example,
)
from .certify import (
    BoundReport,
    DeltaEstimate,
    DistanceEstimate,
    channel_purified_distance,
    compute_C,
    delta_with_recovery,
    lower_bound_theorem1,
    log_epsilon_grid,
    tightness_report,
    tradeoff_check,
    upper_bound_theorem5,
)

__version__ = "0.1.0"
