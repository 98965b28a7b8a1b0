import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fnspace import hardy
from fnspace.embed import d_function_weights
from fnspace.hardy import (ANY, FINITE, INCONCLUSIVE, NON_DECREASING, UNBOUNDED, KernelSpec,
                           StepFunction, Weight, WitnessClassError, conjugate, growth_verdict,
                           heinig_stepanov, lai_forward_condition, lai_reverse_condition,
                           monotone_function_family, ok_hardy_condition, sawyer_b_witness_ratio,
                           sawyer_conditions, witness_test)
from fnspace.svfunc import SVExpr, make_bbar

STD = SVExpr.standard()
GRID = hardy.log_grid(1e-10, 1e10, 41)


def test_weight_power_and_tables():
    w = Weight.power(-2.0)
    assert w(3.0) == pytest.approx(1 / 9)
    assert w.tail(2.0) == pytest.approx(0.5, rel=1e-10)
    assert Weight.power(1.0).head(3.0) == pytest.approx(4.5, rel=1e-10)


def test_log_head_rest_far_from_origin():
    v = Weight.power(0.5, STD, 3.0)
    # below the dense table the Laguerre form must agree with the running integral
    u = -70.0
    assert v.log_head(u) == pytest.approx(math.log(v.head_u(u)), rel=1e-12)


def test_heinig_stepanov_lemma_constant():
    r, q = 1, 2
    w = Weight.power(-1.0, make_bbar(STD, r, q), q)
    v = Weight.power(-1.0, STD, r)
    rep = heinig_stepanov(w, v, q, r, GRID)
    assert rep.sup == pytest.approx((r / q) ** (1 / q), rel=1e-6)
    assert rep.verdict == FINITE


@pytest.mark.parametrize("Q", [2.0, 1.5, 3.0])
def test_classical_hardy(Q):
    rep = ok_hardy_condition(Weight.power(0.0), Weight.power(-Q), Q, Q, GRID)
    assert rep.sup == pytest.approx((Q - 1) ** (-1 / Q), rel=1e-8)
    assert rep.verdict == FINITE


def test_ok_hardy_p_one_uses_ess_sup():
    rep = ok_hardy_condition(Weight.power(0.0), Weight.power(-2.0), 1.0, 2.0, GRID)
    # ||x^{-1}||_{2;(x,inf)} * ess sup 1 = x^{-1/2}: unbounded toward 0
    assert rep.verdict == UNBOUNDED


def test_sawyer_identity_weights():
    one = Weight.power(0.0)
    rep = sawyer_conditions(one, one, 2.0, 2.0, GRID)
    assert rep.A == pytest.approx(1.0, rel=1e-8)
    assert rep.B == pytest.approx(1.0, rel=1e-8)


def test_sawyer_witness_below_criterion():
    one = Weight.power(0.0)
    rep = sawyer_conditions(one, one, 2.0, 2.0, GRID)
    for z in (1e-3, 1.0, 1e3):
        # g_z = chi_(0,z): (z + z)^{1/2} / z^{1/2}
        ratio = sawyer_b_witness_ratio(one, one, 2.0, 2.0, z)
        assert ratio == pytest.approx(math.sqrt(2), rel=1e-8)
        assert ratio <= rep.A + rep.B


def test_sawyer_witness_inadmissible_is_nan():
    v = Weight.power(0.5)
    assert math.isnan(sawyer_b_witness_ratio(v, v, 1.5, 1.5, 1e-3))


def _step1_weights():
    return d_function_weights(0.5, 2.0, 1.0, SVExpr.log_power(0.5), STD)


@pytest.mark.parametrize("z", [1e-6, 0.01, 1.0, 50.0, 1e6])
def test_lai_forward_duality(z):
    wts = _step1_weights()
    rep = lai_forward_condition(wts.kernel, wts.v_max, wts.w, 2.0, 2.0, [z])
    ratio = witness_test("forward", StepFunction.indicator(z), v=wts.v_max, w=wts.w,
                         P=2.0, Q=2.0, kernel=wts.kernel)
    assert rep.trace[0][1] == pytest.approx(ratio, rel=1e-6)


@pytest.mark.parametrize("z", [1e-6, 1.0, 1e6])
def test_lai_reverse_duality(z):
    wts = d_function_weights(0.5, 1.0, 2.0, SVExpr.log_power(0.5), STD)
    rep = lai_reverse_condition(wts.kernel, wts.v_min, wts.w, 0.5, 0.5, [z])
    ratio = witness_test("reverse", StepFunction.indicator(z), v=wts.v_min, w=wts.w,
                         P=0.5, Q=0.5, kernel=wts.kernel)
    assert rep.trace[0][1] == pytest.approx(ratio, rel=1e-6)


def test_lai_parameter_ranges():
    one = Weight.power(0.0)
    with pytest.raises(ValueError):
        lai_forward_condition(KernelSpec.identity(), one, one, 2.0, 1.0)
    with pytest.raises(ValueError):
        lai_reverse_condition(KernelSpec.identity(), one, one, 0.5, 0.8)


def test_lai_forward_trivial_instance():
    # theta = 0, a = 1, r = q = 1: criterion ratio is identically 1
    wts = d_function_weights(0.0, 1.0, 1.0, None, STD)
    rep = lai_forward_condition(wts.kernel, wts.v_max, wts.w, 1.0, 1.0, GRID)
    assert rep.sup == pytest.approx(1.0, rel=1e-8)
    assert all(v == pytest.approx(1.0, rel=1e-6) for _, v in rep.trace)


def test_eo_construction_bound():
    s = 0.5
    wts = d_function_weights(0.5, 1.0, 2.0, SVExpr.log_power(0.5), STD)
    v = hardy.eo_weight_construct(wts.w, wts.kernel.psi, s)
    for h in monotone_function_family(3, 25, ANY):
        ratio = witness_test("eo", h, v=v, w=wts.w, P=s, Q=s, kernel=wts.kernel, s=s)
        assert ratio <= s ** -s * (1 + 1e-6)


def test_eo_closed_form():
    # w = y^{-2}, phi = 1, s = 1/2: w^{1/2} (int_y^inf w)^{1/2} = y^{-3/2}
    v = hardy.eo_weight_construct(Weight.power(-2.0), Weight.power(0.0), 0.5)
    for y in (1e-4, 0.5, 3.0, 1e5):
        assert v(y) == pytest.approx(y ** -1.5, rel=1e-10)


def test_eo_constant_is_s_to_minus_s():
    """Integration by parts plus Young gives int h^s v <= s^{-s} int (int_0^x phi h)^s w."""
    s = 1 / 3
    wts = d_function_weights(0.5, 1.0, 1 / s, SVExpr.log_power(0.5), STD)
    v = hardy.eo_weight_construct(wts.w, wts.kernel.psi, s)
    ratios = [witness_test("eo", h, v=v, w=wts.w, P=s, Q=s, kernel=wts.kernel, s=s)
              for h in monotone_function_family(7, 60, ANY)]
    assert max(ratios) <= s ** -s
    # the smaller constant s^s is exceeded by admissible h
    assert max(ratios) > s ** s


def test_eo_rejects_bad_s():
    with pytest.raises(ValueError):
        hardy.eo_weight_construct(Weight.power(-2.0), Weight.power(0.0), 1.0)


def test_witness_class_enforced():
    h = StepFunction((0.0, 1.0, 2.0), (0.0, 1.0, 0.0))
    one = Weight.power(0.0)
    with pytest.raises(WitnessClassError):
        witness_test("forward", h, v=one, w=one, P=1, Q=1)


def test_monotone_family_reproducible():
    a = monotone_function_family(5, 4)
    b = monotone_function_family(5, 4)
    assert a == b
    assert all(h.is_class(hardy.NON_INCREASING) for h in a)
    assert all(h.is_class(NON_DECREASING) for h in monotone_function_family(5, 4, NON_DECREASING))


def test_growth_verdict():
    zs = [10.0 ** k for k in range(-6, 7)]
    assert growth_verdict([(z, 1.0) for z in zs]) == FINITE
    assert growth_verdict([(z, 4.0 ** k) for k, z in enumerate(zs)]) == UNBOUNDED
    assert growth_verdict([(z, math.inf) for z in zs]) == UNBOUNDED
    assert growth_verdict([(z, 1.0 + k) for k, z in enumerate(zs)]) == INCONCLUSIVE


def test_conjugate():
    assert conjugate(1) == math.inf and conjugate(2) == 2 and conjugate(math.inf) == 1


@settings(max_examples=25, deadline=None)
@given(st.floats(1.1, 4.0), st.floats(0.5, 3.0))
def test_hardy_criterion_homogeneous_in_w(Q, c):
    """Scaling w by c scales the Hardy criterion by c^{1/Q}."""
    v = Weight.power(0.0)
    w = Weight.power(-Q)
    wc = Weight(lambda u: math.log(c), -Q)
    base = ok_hardy_condition(v, w, Q, Q, [1.0]).sup
    assert ok_hardy_condition(v, wc, Q, Q, [1.0]).sup == pytest.approx(c ** (1 / Q) * base, rel=1e-8)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_forward_witness_never_exceeds_criterion(seed):
    """Soundness: the observed ratio never exceeds the criterion sup (same constant)."""
    wts = d_function_weights(0.0, 1.0, 1.0, None, STD)
    sup = lai_forward_condition(wts.kernel, wts.v_max, wts.w, 1.0, 1.0, GRID).sup
    for h in monotone_function_family(seed, 2, log_range=(-20.0, 20.0)):
        ratio = witness_test("forward", h, v=wts.v_max, w=wts.w, P=1.0, Q=1.0, kernel=wts.kernel)
        assert ratio <= sup * (1 + 1e-6)
