from .capacity import (
    CAPACITY_EPS,
    EntropyDomainError,
    NoConvergence,
    binary_entropy,
    capacity,
    capacity_array,
    capacity_closed_form,
    capacity_gradient,
    capacity_oracle,
    correlator_capacity,
    optimal_input,
)
from .family import (
    ChannelSlot,
    MissingRelaxedPair,
    channel_layout,
    channels_from_box,
    channels_from_correlators,
    family_capacities,
)

__all__ = [
    'CAPACITY_EPS',
    'ChannelSlot',
    'EntropyDomainError',
    'MissingRelaxedPair',
    'NoConvergence',
    'binary_entropy',
    'capacity',
    'capacity_array',
    'capacity_closed_form',
    'capacity_gradient',
    'capacity_oracle',
    'channel_layout',
    'channels_from_box',
    'channels_from_correlators',
    'correlator_capacity',
    'family_capacities',
    'optimal_input',
]
