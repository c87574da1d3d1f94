import numpy as np
import pytest

from polybounds import (
    ACE_COEFFS,
    ExperimentalData,
    InconsistentDataError,
    InfeasibleTableError,
    ObservationalData,
    ObservedIVTable,
    RESPONSE_MATRIX,
    ValidationError,
    ZeroConditioningError,
    ace_bounds,
    instrumental_inequality,
    iv_table_from_response_dist,
    manski_bounds,
    oracle_extremal_scan,
    pn_ps_point_bounds,
    pns_bounds,
)
from polybounds.causal import counterfactual_atom_system, pns_objective
from conftest import random_counterfactual_instance, random_iv_table, structural_iv_tables


def perfect_compliance_table(p1=0.7, p0=0.4) -> ObservedIVTable:
    p = np.zeros((2, 2, 2))
    p[1, 1, 1] = p1
    p[0, 1, 1] = 1 - p1
    p[1, 0, 0] = p0
    p[0, 0, 0] = 1 - p0
    return ObservedIVTable(p)


def crafted_violating_table() -> ObservedIVTable:
    p = np.zeros((2, 2, 2))
    p[1, 1, 0] = 1.0  # p(y=1, x=1 | z=0) = 1
    p[0, 1, 1] = 1.0  # p(y=0, x=1 | z=1) = 1
    return ObservedIVTable(p)


def test_response_matrix_structure():
    assert RESPONSE_MATRIX.shape == (8, 16)
    # each type produces exactly one (y, x) cell per instrument arm
    np.testing.assert_allclose(RESPONSE_MATRIX.sum(axis=0), 2.0)
    table = iv_table_from_response_dist(np.full(16, 1 / 16))
    assert np.abs(table.p.sum(axis=(0, 1)) - 1.0).max() < 1e-12


def test_instrumental_inequality_perfect_compliance():
    t = perfect_compliance_table()
    check = instrumental_inequality(t)
    assert check.holds and check.value == pytest.approx(1.0)
    assert check.variant == "standard"


def test_instrumental_inequality_crafted_violation():
    t = crafted_violating_table()
    check = instrumental_inequality(t)
    assert not check.holds
    assert check.value == pytest.approx(2.0)
    # the literal printed form never exceeds one, even here
    literal = instrumental_inequality(t, "paper_literal")
    assert literal.holds and literal.value == pytest.approx(1.0)


def test_paper_literal_variant_is_vacuous_on_random_tables():
    rng = np.random.default_rng(51)
    for _ in range(50):
        raw = rng.dirichlet(np.ones(4), size=2)  # arbitrary conditional tables, not IV-generated
        p = np.zeros((2, 2, 2))
        for z in range(2):
            p[:, :, z] = raw[z].reshape(2, 2)
        check = instrumental_inequality(ObservedIVTable(p), "paper_literal")
        assert check.value <= 1.0 + 1e-12


def test_instrumental_inequality_on_forward_simulated_tables():
    rng = np.random.default_rng(52)
    for raw in structural_iv_tables(rng, 300):
        assert instrumental_inequality(ObservedIVTable(raw)).holds


def test_ace_bounds_perfect_compliance_point_identified():
    iv = ace_bounds(perfect_compliance_table())
    assert iv.lo == pytest.approx(0.3, abs=1e-9)
    assert iv.hi == pytest.approx(0.3, abs=1e-9)


def test_ace_bounds_degenerate_table_matches_oracle():
    p = np.zeros((2, 2, 2))
    p[0, 0, 0] = 1.0
    p[0, 0, 1] = 1.0
    t = ObservedIVTable(p)
    iv = ace_bounds(t)
    oracle = oracle_extremal_scan(ACE_COEFFS, A=RESPONSE_MATRIX, b=t.flat())
    assert iv.lo == pytest.approx(oracle.lo, abs=1e-9)
    assert iv.hi == pytest.approx(oracle.hi, abs=1e-9)
    # everyone untreated with null outcomes leaves only the treated response free
    assert iv.lo == pytest.approx(0.0, abs=1e-9)
    assert iv.hi == pytest.approx(1.0, abs=1e-9)


def test_ace_bounds_infeasible_table_raises():
    with pytest.raises(InfeasibleTableError):
        ace_bounds(crafted_violating_table())


def test_ace_bounds_against_oracle_and_monte_carlo():
    rng = np.random.default_rng(53)
    from polybounds import oracle_feasible_vertices

    for _ in range(25):
        t = random_iv_table(rng)
        iv = ace_bounds(t)
        assert -1.0 - 1e-9 <= iv.lo <= iv.hi <= 1.0 + 1e-9
        assert iv.width < 1.0
        oracle = oracle_extremal_scan(ACE_COEFFS, A=RESPONSE_MATRIX, b=t.flat())
        assert iv.lo == pytest.approx(oracle.lo, abs=1e-9)
        assert iv.hi == pytest.approx(oracle.hi, abs=1e-9)
        # every feasible mixture's effect lands inside the interval
        vertices = oracle_feasible_vertices(RESPONSE_MATRIX, t.flat())
        weights = rng.dirichlet(np.ones(len(vertices)), size=20)
        for q in weights @ vertices:
            assert iv.lo - 1e-9 <= ACE_COEFFS @ q <= iv.hi + 1e-9


def test_balke_pearl_interval_nested_in_manski_interval():
    rng = np.random.default_rng(58)
    for _ in range(30):
        t = random_iv_table(rng)
        bp = ace_bounds(t)
        p_yx = t.p.mean(axis=2)  # uniform instrument mixing
        px1 = float(p_yx[:, 1].sum())
        e1 = float(p_yx[1, 1] / px1)
        e0 = float(p_yx[1, 0] / (1.0 - px1))
        manski = manski_bounds(e1, e0, px1)
        assert manski.encloses(bp, tol=1e-9)


def test_manski_examples_and_invariants():
    iv = manski_bounds(0.7, 0.4, 0.5)
    assert iv.lo == pytest.approx(-0.35, abs=1e-12)
    assert iv.hi == pytest.approx(0.65, abs=1e-12)
    everyone_treated = manski_bounds(1.0, 0.0, 1.0)
    assert everyone_treated.lo == pytest.approx(0.0, abs=1e-12)
    assert everyone_treated.hi == pytest.approx(1.0, abs=1e-12)
    rng = np.random.default_rng(54)
    for _ in range(200):
        e1, e0, px1 = rng.uniform(0, 1, 3)
        iv = manski_bounds(e1, e0, px1)
        assert iv.width == pytest.approx(1.0, abs=1e-12)
        assert iv.lo <= 1e-12 and iv.hi >= -1e-12
    with pytest.raises(ValidationError):
        manski_bounds(1.2, 0.0, 0.5)


def test_pns_worked_example():
    exp = ExperimentalData(0.7, 0.3)
    obs = ObservationalData([[0.3, 0.2], [0.1, 0.4]])
    iv = pns_bounds(exp, obs)
    assert iv.lo == pytest.approx(0.4, abs=1e-12)
    assert iv.hi == pytest.approx(0.7, abs=1e-12)


def test_pns_equal_rates_bounds():
    rng = np.random.default_rng(55)
    for _ in range(40):
        pi = rng.dirichlet(np.ones(8))
        # symmetrize so both interventional rates agree
        pi = (pi + pi[[0, 1, 4, 5, 2, 3, 6, 7]]) / 2  # swap y0 <-> y1 atom blocks
        p_do1 = float(pi[2] + pi[3] + pi[6] + pi[7])
        p_do0 = float(pi[4] + pi[5] + pi[6] + pi[7])
        assert p_do1 == pytest.approx(p_do0)
        joint = np.array([[pi[0] + pi[2], pi[4] + pi[6]], [pi[1] + pi[5], pi[3] + pi[7]]])
        iv = pns_bounds(ExperimentalData(p_do1, p_do0), ObservationalData(joint))
        assert iv.lo >= -1e-12
        assert iv.hi <= p_do1 + 1e-12


def test_pns_formula_matches_lp_oracle():
    rng = np.random.default_rng(56)
    for _ in range(150):
        exp, obs = random_counterfactual_instance(rng)
        formula = pns_bounds(exp, obs)
        A, b = counterfactual_atom_system(exp, obs)
        oracle = oracle_extremal_scan(pns_objective(), A=A, b=b)
        assert formula.lo == pytest.approx(oracle.lo, abs=1e-9)
        assert formula.hi == pytest.approx(oracle.hi, abs=1e-9)


def test_pns_inconsistent_data_raises():
    exp = ExperimentalData(1.0, 0.0)
    obs = ObservationalData([[0.0, 0.5], [0.5, 0.0]])
    with pytest.raises(InconsistentDataError):
        pns_bounds(exp, obs)


def test_pn_deterministic_outcome_equals_one():
    exp = ExperimentalData(1.0, 0.0)
    obs = ObservationalData([[0.5, 0.0], [0.0, 0.5]])
    pn, ps = pn_ps_point_bounds(exp, obs)
    assert pn.lo == pytest.approx(1.0, abs=1e-9)
    assert pn.hi == pytest.approx(1.0, abs=1e-9)
    assert ps.lo == pytest.approx(1.0, abs=1e-9)


def test_pn_symmetric_null_contains_no_effect_point():
    # treatment independent of everything, same outcome rate everywhere
    p = 0.4
    joint = np.array([[0.5 * (1 - p), 0.5 * p], [0.5 * (1 - p), 0.5 * p]])
    exp = ExperimentalData(p, p)
    pn, ps = pn_ps_point_bounds(exp, ObservationalData(joint))
    assert pn.contains(0.0, tol=1e-9)
    assert ps.contains(0.0, tol=1e-9)


def test_pn_ps_well_ordered_and_match_enumeration():
    rng = np.random.default_rng(57)
    pn_obj = np.zeros(8)
    pn_obj[3] = 1.0  # atom (y0=0, y1=1, x=1)
    ps_obj = np.zeros(8)
    ps_obj[2] = 1.0  # atom (y0=0, y1=1, x=0)
    for _ in range(60):
        exp, obs = random_counterfactual_instance(rng)
        if obs.joint[1, 1] <= 1e-6 or obs.joint[0, 0] <= 1e-6:
            continue
        pn, ps = pn_ps_point_bounds(exp, obs)
        assert pn.lo <= pn.hi + 1e-12
        assert ps.lo <= ps.hi + 1e-12
        A, b = counterfactual_atom_system(exp, obs)
        oracle_pn = oracle_extremal_scan(pn_obj, A=A, b=b)
        assert pn.lo == pytest.approx(oracle_pn.lo / obs.joint[1, 1], abs=1e-8)
        assert pn.hi == pytest.approx(oracle_pn.hi / obs.joint[1, 1], abs=1e-8)
        oracle_ps = oracle_extremal_scan(ps_obj, A=A, b=b)
        assert ps.lo == pytest.approx(oracle_ps.lo / obs.joint[0, 0], abs=1e-8)
        assert ps.hi == pytest.approx(oracle_ps.hi / obs.joint[0, 0], abs=1e-8)


def test_pn_zero_conditioning_raises():
    exp = ExperimentalData(0.5, 0.5)
    obs = ObservationalData([[0.5, 0.5], [0.0, 0.0]])
    with pytest.raises(ZeroConditioningError):
        pn_ps_point_bounds(exp, obs)
