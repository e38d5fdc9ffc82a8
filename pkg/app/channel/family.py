from __future__ import annotations

from typing import List, NamedTuple, Tuple

import numpy as np

from app.box import TripartiteBox, correlator_vector
from app.channel.capacity import CAPACITY_EPS, correlator_capacity
from app.schemas.core import ChannelFamily, ChannelReport, CorrelatorVector, correlator_labels


class MissingRelaxedPair(ValueError):
    pass


class ChannelSlot(NamedTuple):
    label: str
    x_index: int
    y_index: int


def channel_layout(m: int, relaxed: bool = False) -> Tuple[ChannelSlot, ...]:
    """Which coordinates of a correlator vector form each channel.

    B-side channels come first (S^i_{B->AE}, i = 0..M-1), then A-side channels (S^i_{A->BE},
    i = 1..M-1), then the relaxed S^0_{A->BE}.
    """
    index = {label: k for k, label in enumerate(correlator_labels(m, relaxed))}
    slots: List[ChannelSlot] = []
    for i in range(m):
        slots.append(ChannelSlot(f'S{i}_B->AE', index[f'x_b{i}'], index[f'y_b{i}']))
    for i in range(1, m):
        slots.append(ChannelSlot(f'S{i}_A->BE', index[f'x_a{i}'], index[f'y_a{i}']))
    if relaxed:
        slots.append(ChannelSlot('S0_A->BE', index['x_a0'], index['y_a0']))
    return tuple(slots)


def family_capacities(
    values: np.ndarray, layout: Tuple[ChannelSlot, ...], eps: float = CAPACITY_EPS
) -> np.ndarray:
    """Capacities of every channel for one correlator array (..., dim) -> (..., channels)."""
    values = np.asarray(values, dtype=float)
    xs = values[..., [slot.x_index for slot in layout]]
    ys = values[..., [slot.y_index for slot in layout]]
    return correlator_capacity(xs, ys, eps)


def channels_from_correlators(
    c: CorrelatorVector, relaxed: bool = False, eps: float = CAPACITY_EPS
) -> ChannelFamily:
    if relaxed and not c.relaxed:
        raise MissingRelaxedPair('relaxed channel family needs x_a0/y_a0 in the correlator vector')
    values = c.as_array()
    if c.relaxed and not relaxed:
        values = values[: len(correlator_labels(c.m))]
    layout = channel_layout(c.m, relaxed)
    capacities = family_capacities(values, layout, eps)
    channels = [
        ChannelReport(
            label=slot.label,
            p=(1.0 + float(values[slot.x_index])) / 2.0,
            q=(1.0 + float(values[slot.y_index])) / 2.0,
            capacity=float(cap),
        )
        for slot, cap in zip(layout, capacities)
    ]
    return ChannelFamily(channels=channels)


def channels_from_box(
    box: TripartiteBox, relaxed: bool = False, eps: float = CAPACITY_EPS
) -> ChannelFamily:
    return channels_from_correlators(correlator_vector(box, relaxed=relaxed), relaxed, eps)
