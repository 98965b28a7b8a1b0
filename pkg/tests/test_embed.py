import json
import math

import pytest

from fnspace import embed, hardy
from fnspace.embed import (BOUNDED, FAILS, HOLDS, TRIVIAL, UNBOUNDED, EmbeddingCase, analyze,
                           btilde_consistency, empirical_embedding_constant, kappa_at_zero,
                           optimality_chain, sharpness_probe, standard_case, strictness_demo,
                           theorem48_410_check)
from fnspace.hardy import Weight
from fnspace.rearrange import SampledFunction
from fnspace.svfunc import SVExpr

STD = SVExpr.standard()
# l^{-1/2} near 0 keeps the Besov hypothesis for r = 2
HALF = SVExpr.log_power(-0.5, -2.0)


def test_analyze_holds():
    rep = analyze(standard_case(3, 1, 2))
    assert rep.verdict == HOLDS and rep.hypothesis_holds
    assert rep.head_check["agrees"]
    assert rep.tail_check["rel_err"] < 1e-8


def test_analyze_fails_below_r():
    rep = analyze(EmbeddingCase(1, 3, 2, 1, HALF))
    assert rep.verdict == FAILS


def test_analyze_hypothesis_failure_notes():
    # l^{-2} is integrable at 0 with r = 2: the Besov space is trivial
    rep = analyze(EmbeddingCase(1, 3, 2, 1, STD))
    assert rep.verdict == TRIVIAL and not rep.hypothesis_holds
    assert rep.notes


def test_analyze_q_equals_r_note():
    rep = analyze(EmbeddingCase(1, 3, 2, 2, HALF))
    assert any("bbar equals b" in n for n in rep.notes)
    for t in (1e-8, 0.3, 1e5):
        assert rep.bbar(t) == pytest.approx(HALF(t), rel=1e-8)


def test_case_json_roundtrip_and_validation():
    case = EmbeddingCase(2, 3, 1, 2, STD, SVExpr.constant(1.0))
    back = EmbeddingCase.from_json(json.loads(json.dumps(case.to_json())))
    assert back == case
    with pytest.raises(ValueError):
        EmbeddingCase.from_json({"p": 3, "r": 1, "q": 2, "colour": 1})
    with pytest.raises(ValueError):
        EmbeddingCase(1, 1.0, 1, 2, STD)
    with pytest.raises(ValueError):
        EmbeddingCase(1, 3, 0.5, 2, STD)


def test_rho():
    assert standard_case(3, 1, 2).rho == pytest.approx(6.0)
    assert math.isinf(standard_case(2, 1, 3).rho)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_optimality_constant(n):
    case = EmbeddingCase(n, 3, 1, 2, STD)
    rep = optimality_chain(case)
    assert rep.sup == pytest.approx(rep.params["expected"], rel=1e-5)
    assert rep.params["expected"] == pytest.approx((n / 2) ** 0.5 / n, rel=1e-12)


def test_kappa_at_zero():
    assert kappa_at_zero(SVExpr.log_power(0.5, 0.0)) == math.inf
    assert kappa_at_zero(SVExpr.constant(2.0)) == 2.0
    assert kappa_at_zero(SVExpr.log_power(-1.0)) == 0.0


def test_sharpness_unbounded_and_bounded():
    up = sharpness_probe(EmbeddingCase(1, 3, 1, 2, STD, SVExpr.log_power(0.5, 0.0)))
    assert up.verdict == UNBOUNDED
    vals = [v for _, v in up.trace]
    assert vals[-1] > vals[0]
    flat = sharpness_probe(EmbeddingCase(1, 3, 1, 2, STD, SVExpr.constant(1.0)))
    assert flat.verdict == BOUNDED
    assert flat.trace[-1][1] == pytest.approx(1.0, rel=1e-3)


def test_sharpness_rejects_increasing_kappa():
    with pytest.raises(ValueError):
        EmbeddingCase(1, 3, 1, 2, STD, SVExpr.log_power(-0.25))


def test_equality_bracket():
    rep = strictness_demo(standard_case(2, 1, 2))
    assert rep.branch == "q=p" and rep.verdict == "equal"
    assert rep.extra["bracket"] <= 50


def test_strict_witness_grows():
    rep = strictness_demo(standard_case(3, 1, 2))
    assert rep.branch == "q<p" and rep.verdict == UNBOUNDED
    vals = [v for _, v in rep.trace]
    assert vals[-1] >= 10 * vals[0]


def test_sawyer_branch_is_unbounded():
    rep = strictness_demo(standard_case(2, 1, 3))
    assert rep.branch == "q>p"
    assert rep.verdict == UNBOUNDED
    assert rep.notes


def test_strictness_needs_holding_case():
    with pytest.raises(ValueError):
        strictness_demo(EmbeddingCase(1, 3, 2, 1, HALF))


def test_btilde_consistency():
    res = btilde_consistency(standard_case(3, 1, 2), hardy.log_grid(1e-8, 1e8, 17))
    assert res["bracket"] <= 2


def test_cgo2_zero_weight():
    rep = embed.cgo2_condition(standard_case(3, 1, 2), Weight(lambda u: -math.inf, 0.0, "0"),
                               hardy.log_grid(1e-6, 1.0, 7))
    assert rep.sup == 0.0


def test_d_function_check_trivial_instance():
    out = theorem48_410_check(0.0, 1.0, 1.0, None, STD, hardy.log_grid(1e-6, 1e6, 13))
    assert out["first"].sup == pytest.approx(1.0, rel=1e-6)
    assert out["second"].sup == pytest.approx(1.0, rel=1e-6)


def test_d_function_check_eo_and_reverse():
    out = theorem48_410_check(0.5, 1.0, 2.0, SVExpr.log_power(0.5), STD,
                              hardy.log_grid(1e-6, 1e6, 13))
    assert out["first"].verdict == hardy.FINITE
    assert out["second"].params["branch"] == "lai_reverse"
    assert out["second"].verdict == hardy.FINITE


def test_d_function_check_hardy_branch():
    out = theorem48_410_check(0.5, 2.0, 1.0, SVExpr.log_power(0.5), STD,
                              hardy.log_grid(1e-6, 1e6, 13))
    assert out["first"].params["branch"] == "lai_forward"
    assert out["second"].params["branch"] == "hardy"
    assert out["second"].sup <= 1.0 + 1e-6


def test_empirical_constant_small_family():
    fam = [("zero", SampledFunction.from_steps([0.0, 1.0], [0.0])),
           ("indicator k=0", SampledFunction.indicator(0.0, 1.0, 1.0)),
           ("indicator k=2", SampledFunction.indicator(0.0, 4.0, 1.0))]
    res = empirical_embedding_constant(standard_case(3, 1, 2), fam)
    assert [s[0] for s in res.skipped] == ["zero"]
    assert len(res.rows) == 2
    assert 0 < res.min_ratio <= res.max_ratio < math.inf


def test_empirical_constant_requires_embedding():
    with pytest.raises(ValueError):
        empirical_embedding_constant(EmbeddingCase(1, 3, 2, 1, HALF))
