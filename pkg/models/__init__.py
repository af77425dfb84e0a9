# models/__init__.py

from .entities import (
    SystemConfig,
    FunctionDomain,
    SpectrumInterval,
    HermitianMatrix,
    SpectralDecomposition,
)
from .functions import (
    FunctionBase,
    Log,
    Power,
    DeformedLog,
    PowerLog,
    Affine,
    Transpose,
    GeneralizedTranspose,
    Shift,
    ScalarFn,
    Expectation,
    ConvexityClaim,
)
from .entropies import (
    JointMapBase,
    RelativeOperator,
    GeneralizedRelative,
    RelativeAlphaBeta,
    Tsallis,
    TsallisAlphaBeta,
    EntropySpec,
    PerspectiveMap,
    GeneralizedPerspectiveMap,
    NegatedMap,
    JointMapModel,
)
from .probes import (
    Direction,
    Verdict,
    RegionClass,
    ClaimExpectation,
    WeightPolicy,
    ProbeConfig,
    Counterexample,
    ProbeReport,
    RegionCell,
    ClaimDefinition,
)
from .dtos import (
    CampaignOverrides,
    ComputeRequest,
    ProbeRequest,
    ScanRequest,
    CheckIdentityRequest,
    SelftestRequest,
    CommandResponse,
)

__all__ = [
    'SystemConfig',
    'FunctionDomain',
    'SpectrumInterval',
    'HermitianMatrix',
    'SpectralDecomposition',
    'FunctionBase',
    'Log',
    'Power',
    'DeformedLog',
    'PowerLog',
    'Affine',
    'Transpose',
    'GeneralizedTranspose',
    'Shift',
    'ScalarFn',
    'Expectation',
    'ConvexityClaim',
    'JointMapBase',
    'RelativeOperator',
    'GeneralizedRelative',
    'RelativeAlphaBeta',
    'Tsallis',
    'TsallisAlphaBeta',
    'EntropySpec',
    'PerspectiveMap',
    'GeneralizedPerspectiveMap',
    'NegatedMap',
    'JointMapModel',
    'Direction',
    'Verdict',
    'RegionClass',
    'ClaimExpectation',
    'WeightPolicy',
    'ProbeConfig',
    'Counterexample',
    'ProbeReport',
    'RegionCell',
    'ClaimDefinition',
    'CampaignOverrides',
    'ComputeRequest',
    'ProbeRequest',
    'ScanRequest',
    'CheckIdentityRequest',
    'SelftestRequest',
    'CommandResponse',
]
