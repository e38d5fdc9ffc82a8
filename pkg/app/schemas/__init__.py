from .core import (
    BellScenario,
    BinaryChannel,
    BoxCheckReport,
    C2Report,
    ChannelFamily,
    ChannelReport,
    CharacterizationReport,
    CheckRow,
    CorrelatorVector,
    MonogamyReport,
    NoSignalingReport,
    SignFlipRecord,
    StrengthCurve,
    StrengthResult,
    StrengthRow,
    VerificationReport,
    correlator_labels,
)

__all__ = [
    'BellScenario',
    'BinaryChannel',
    'BoxCheckReport',
    'C2Report',
    'ChannelFamily',
    'ChannelReport',
    'CharacterizationReport',
    'CheckRow',
    'CorrelatorVector',
    'MonogamyReport',
    'NoSignalingReport',
    'SignFlipRecord',
    'StrengthCurve',
    'StrengthResult',
    'StrengthRow',
    'VerificationReport',
    'correlator_labels',
]
