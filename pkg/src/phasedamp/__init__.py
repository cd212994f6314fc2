"""Phase-damping channel toolkit.

Builds and validates phase-damping channels, certifies channels outside the
random-unitary set through the Bloch-simplex volume of their dynamical
vectors, and estimates channel quantumness through the entanglement of
assistance of the Jamiolkowski state.
"""

from phasedamp.assistance import (
    AssistanceResult,
    OptimizerConfig,
    entanglement_of_assistance,
    quantumness_of_assistance,
)
from phasedamp.bloch import (
    BlochVector,
    ExtremalityCertificate,
    GeneratorBasis,
    SquaredDistanceMatrix,
    barycenter_purity,
    bloch_from_state,
    bloch_volume,
    cayley_menger_volume,
    channel_bloch_vectors,
    extremality_certificate,
    gram_volume_oracle,
    max_subvolume,
    squared_distances,
    su_generators,
)
from phasedamp.channels import (
    TETRAHEDRAL_ANGLE,
    ChannelValidationError,
    DensityMatrix,
    DynamicalVectors,
    KrausSet,
    PhaseDampingChannel,
    RuDecomposition,
    ValidationReport,
    apply_channel,
    apply_kraus,
    channel_from_json,
    channel_from_vectors,
    channel_rank,
    channel_to_json,
    completely_decohering,
    completely_decohering_ru,
    kraus_from_vectors,
    matrix_from_json,
    mcmq_channel,
    mix_channels,
    tetra_channel,
    validate_channel,
    vectors_from_channel,
    verify_ru_decomposition,
)
from phasedamp.choi import (
    ChoiState,
    Decomposition,
    choi_purity,
    choi_state,
    decomposition_from_isometry,
    entanglement_entropy,
)
from phasedamp.sampling import (
    SampleRecord,
    random_channel,
    random_unit_vector,
    sample_batch,
    sample_record,
)

__version__ = "0.1.0"

__all__ = [
    "AssistanceResult",
    "BlochVector",
    "ChannelValidationError",
    "ChoiState",
    "Decomposition",
    "DensityMatrix",
    "DynamicalVectors",
    "ExtremalityCertificate",
    "GeneratorBasis",
    "KrausSet",
    "OptimizerConfig",
    "PhaseDampingChannel",
    "RuDecomposition",
    "SampleRecord",
    "SquaredDistanceMatrix",
    "TETRAHEDRAL_ANGLE",
    "ValidationReport",
    "apply_channel",
    "apply_kraus",
    "barycenter_purity",
    "bloch_from_state",
    "bloch_volume",
    "cayley_menger_volume",
    "channel_bloch_vectors",
    "channel_from_json",
    "channel_from_vectors",
    "channel_rank",
    "channel_to_json",
    "choi_purity",
    "choi_state",
    "completely_decohering",
    "completely_decohering_ru",
    "decomposition_from_isometry",
    "entanglement_entropy",
    "entanglement_of_assistance",
    "extremality_certificate",
    "gram_volume_oracle",
    "kraus_from_vectors",
    "matrix_from_json",
    "max_subvolume",
    "mcmq_channel",
    "mix_channels",
    "quantumness_of_assistance",
    "random_channel",
    "random_unit_vector",
    "sample_batch",
    "sample_record",
    "squared_distances",
    "su_generators",
    "tetra_channel",
    "validate_channel",
    "vectors_from_channel",
    "verify_ru_decomposition",
]
