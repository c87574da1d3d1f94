import numpy as np
import pytest

from polybounds import (
    Behavior,
    CorrelationTable,
    Interval,
    NormalizationError,
    ObservedIVTable,
    ResponseTypeDist,
    ValidationError,
    behavior_to_correlations,
    chsh_value,
    chsh_variant_values,
)
from conftest import random_local_behavior, random_nosignaling_behavior


def test_uniform_behavior_has_zero_correlations():
    e = behavior_to_correlations(Behavior.uniform()).e
    assert np.abs(e).max() == 0.0


def test_pr_box_correlations_and_value():
    e = behavior_to_correlations(Behavior.pr_box()).e
    np.testing.assert_allclose(e, [[1, 1], [1, -1]])
    assert chsh_value(CorrelationTable(e)) == pytest.approx(4.0, abs=1e-12)


def test_chsh_examples():
    assert chsh_value(CorrelationTable(np.ones((2, 2)))) == pytest.approx(2.0)
    s = np.sqrt(2) / 2
    tsirelson = CorrelationTable([[s, s], [s, -s]])
    assert chsh_value(tsirelson) == pytest.approx(2 * np.sqrt(2), abs=1e-12)


def test_negative_entry_rejected():
    p = np.full((2, 2, 2, 2), 0.25)
    p[0, 0, 0, 0] = -0.01
    p[1, 1, 0, 0] = 0.51
    with pytest.raises(ValidationError):
        Behavior(p)


def test_bad_normalization_rejected_and_renormalize_helper():
    p = np.full((2, 2, 2, 2), 0.3)
    with pytest.raises(NormalizationError):
        Behavior(p)
    b = Behavior.renormalize(p)
    assert np.abs(b.p.sum(axis=(0, 1)) - 1.0).max() < 1e-12


def test_signaling_flagged_not_rejected():
    p = np.full((2, 2, 2, 2), 0.25)
    # make Alice's marginal at x=0 depend on y
    p[:, :, 0, 0] = [[0.5, 0.3], [0.1, 0.1]]
    p[:, :, 0, 1] = [[0.1, 0.1], [0.3, 0.5]]
    b = Behavior(p)
    assert not b.no_signaling


def test_behavior_to_correlations_is_linear():
    rng = np.random.default_rng(11)
    for _ in range(25):
        b1 = random_nosignaling_behavior(rng)
        b2 = random_nosignaling_behavior(rng)
        lam = rng.uniform()
        mixed = Behavior(lam * b1.p + (1 - lam) * b2.p)
        expected = lam * behavior_to_correlations(b1).e + (1 - lam) * behavior_to_correlations(b2).e
        np.testing.assert_allclose(behavior_to_correlations(mixed).e, expected, atol=1e-12)


def test_local_mixtures_respect_all_chsh_variants():
    rng = np.random.default_rng(12)
    for _ in range(50):
        b = random_local_behavior(rng)
        variants = chsh_variant_values(behavior_to_correlations(b))
        assert np.abs(variants).max() <= 2.0 + 1e-9


def test_nosignaling_chsh_within_four():
    rng = np.random.default_rng(13)
    for _ in range(50):
        b = random_nosignaling_behavior(rng)
        assert abs(chsh_value(behavior_to_correlations(b))) <= 4.0 + 1e-9


def test_variant_table_shape_and_canonical_position():
    variants = chsh_variant_values(CorrelationTable([[1, 1], [1, -1]]))
    assert variants.shape == (8,)
    assert variants[3] == pytest.approx(4.0)  # canonical CHSH sits at index 3


def test_interval_invariants():
    iv = Interval(0.2, 0.7)
    assert iv.width == pytest.approx(0.5)
    assert iv.contains(0.2) and iv.contains(0.7) and not iv.contains(0.71)
    with pytest.raises(ValidationError):
        Interval(1.0, 0.0)
    # tolerated inversion within slack
    Interval(1.0, 1.0 - 1e-13)


def test_response_type_dist_validation():
    ResponseTypeDist(np.full(16, 1 / 16))
    with pytest.raises(NormalizationError):
        ResponseTypeDist(np.full(16, 0.1))
    with pytest.raises(ValidationError):
        ResponseTypeDist(np.full(8, 0.125))


def test_iv_table_validation():
    p = np.zeros((2, 2, 2))
    p[0, 0, 0] = 1.0
    p[0, 0, 1] = 1.0
    ObservedIVTable(p)
    with pytest.raises(NormalizationError):
        ObservedIVTable(p * 0.5)
    t = ObservedIVTable.renormalize(p * 0.5)
    assert np.abs(t.p.sum(axis=(0, 1)) - 1.0).max() < 1e-12


def test_correlation_table_range_check():
    with pytest.raises(ValidationError):
        CorrelationTable([[1.5, 0], [0, 0]])
