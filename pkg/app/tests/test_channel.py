import numpy as np
import pytest

from app.box import make_box, reference_box
from app.channel import (
    EntropyDomainError,
    MissingRelaxedPair,
    binary_entropy,
    capacity,
    capacity_array,
    capacity_closed_form,
    capacity_gradient,
    capacity_oracle,
    channel_layout,
    channels_from_box,
    channels_from_correlators,
    optimal_input,
)
from app.schemas.core import BellScenario, BinaryChannel, CorrelatorVector
from app.strength import optimal_family


@pytest.mark.parametrize(
    'p, q, expected, tol',
    [
        (1.0, 0.5, 0.321928, 1e-6),
        (0.75, 0.25, 0.1887, 1e-4),
        (1.0, 0.0, 1.0, 1e-12),
        (0.4, 0.4, 0.0, 0.0),
    ],
)
def test_capacity_examples(p, q, expected, tol):
    assert capacity(BinaryChannel(p=p, q=q)) == pytest.approx(expected, abs=tol)


def test_binary_entropy_values_and_domain():
    assert binary_entropy(2 / 3) == pytest.approx(0.9183, abs=1e-4)
    assert binary_entropy(0.0) == 0.0
    with pytest.raises(EntropyDomainError):
        binary_entropy(-0.1)


def test_capacity_symmetries_and_closed_form():
    rng = np.random.default_rng(5)
    p, q = rng.uniform(0.05, 0.95, size=(2, 200))
    base = capacity_array(p, q)
    assert np.allclose(base, capacity_array(q, p), atol=1e-12)
    assert np.allclose(base, capacity_array(1 - p, 1 - q), atol=1e-12)
    assert capacity_closed_form(0.3, 0.8) == pytest.approx(
        capacity(BinaryChannel(p=0.3, q=0.8)), abs=1e-9
    )


@pytest.mark.parametrize('p, q', [(0.3, 0.8), (0.99, 0.6), (0.05, 0.07), (1.0, 0.5)])
def test_blahut_arimoto_oracle_agrees(p, q):
    ch = BinaryChannel(p=p, q=q)
    assert capacity_oracle(ch) == pytest.approx(capacity(ch), abs=1e-6)


def test_optimal_input_is_uniform_for_symmetric_channels():
    assert optimal_input(BinaryChannel(p=0.9, q=0.1)) == pytest.approx(0.5)
    assert optimal_input(BinaryChannel(p=1.0, q=0.5)) == pytest.approx(0.6)


def test_capacity_gradient_matches_finite_differences():
    p, q, h = 0.3, 0.7, 1e-6
    grad_p, grad_q = capacity_gradient(p, q)
    numeric_p = (capacity_closed_form(p + h, q) - capacity_closed_form(p - h, q)) / (2 * h)
    numeric_q = (capacity_closed_form(p, q + h) - capacity_closed_form(p, q - h)) / (2 * h)
    assert float(grad_p) == pytest.approx(numeric_p, abs=1e-5)
    assert float(grad_q) == pytest.approx(numeric_q, abs=1e-5)
    zero_p, zero_q = capacity_gradient(0.4, 0.4)
    assert float(zero_p) == 0.0 and float(zero_q) == 0.0


def test_channel_layout_labels():
    assert [slot.label for slot in channel_layout(2)] == ['S0_B->AE', 'S1_B->AE', 'S1_A->BE']
    relaxed = channel_layout(2, relaxed=True)
    assert relaxed[-1].label == 'S0_A->BE'
    assert len(channel_layout(3)) == 5


def test_reference_box_channels_equalize_at_optimal_x():
    point = optimal_family(2.0)
    family = channels_from_box(reference_box(2.0, point.x_star))
    capacities = [ch.capacity for ch in family.channels]
    assert capacities == pytest.approx([point.value] * 3, abs=1e-9)
    assert family.max_capacity == pytest.approx(0.158, abs=0.002)
    by_label = family.by_label()
    assert by_label['S0_B->AE'].p == pytest.approx(1.0)


def test_uniform_box_has_no_signaling_capacity():
    box = make_box(BellScenario(m=2), np.full((2, 2, 2, 2, 2), 0.125))
    assert channels_from_box(box, relaxed=True).max_capacity == 0.0


def test_relaxed_family_needs_relaxed_pair():
    c = CorrelatorVector(m=2, x_a=[0.1], y_a=[-0.1], x_b=[0.5, 0.5], y_b=[0.1, 0.1])
    with pytest.raises(MissingRelaxedPair):
        channels_from_correlators(c, relaxed=True)
    assert len(channels_from_correlators(c).channels) == 3


def test_capacity_vanishes_continuously_at_the_diagonal():
    assert capacity(BinaryChannel(p=0.3, q=0.3 + 1e-6)) < 1e-10
    assert capacity_array(0.3, 0.3 + 5e-13) == 0.0
    assert capacity_array(0.3, 0.301) > 0.0


def test_correlator_vector_from_array_rejects_out_of_range_values():
    with pytest.raises(ValueError, match='x_a1=1.5 outside'):
        CorrelatorVector.from_array(2, [1.5, 0, 0, 0, 0, 0])
    with pytest.raises(ValueError, match='y_a0'):
        CorrelatorVector.from_array(2, [0, 0, 0, 0, 0, 0, 0, float('nan')], relaxed=True)
    rounded = CorrelatorVector.from_array(2, [1 + 5e-10, 0, 0, 0, 0, -1 - 5e-10])
    assert rounded.x_a == [1.0] and rounded.y_b[1] == -1.0
