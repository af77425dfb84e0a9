from .commands import ComputeCommand, ProbeCommand, ScanCommand, CheckIdentityCommand, SelftestCommand
from .projectors import ReportProjector, ScanProjector
from .probe import ProbeEngine
from .registry import ClaimRegistry

__all__ = [
    'ComputeCommand',
    'ProbeCommand',
    'ScanCommand',
    'CheckIdentityCommand',
    'SelftestCommand',
    'ReportProjector',
    'ScanProjector',
    'ProbeEngine',
    'ClaimRegistry',
]
