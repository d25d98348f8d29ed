"""Curve and pair classification, plus the identity suite."""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from bertrand_kit.classify import (
    classify_curve,
    pair_classify,
    theorem_suite,
)
from bertrand_kit.curves import AnalyticCurve, SampledCurve
from bertrand_kit.errors import TooFewSamplesError
from bertrand_kit.indicatrix import indicatrix_curve


def test_helix_classification(helix):
    cc = classify_curve(helix, n=64)
    assert cc.general_helix
    assert cc.slant_helix  # Gamma = 0 is constant
    assert not cc.planar
    assert not cc.spherical


def test_circle_classification():
    circle = AnalyticCurve("cos(t)", "sin(t)", "0*t", (0.0, 6.0))
    cc = classify_curve(circle, n=64)
    assert cc.planar
    assert cc.spherical
    assert cc.metrics["sphere_fit_radius"] == pytest.approx(1.0, abs=1e-8)


def test_generic_base_classification(pair_wobble):
    cc = classify_curve(pair_wobble.base, n=64)
    assert not cc.planar
    assert not cc.general_helix
    assert not cc.slant_helix
    assert not cc.spherical


def test_slant_base_classification(pair_slant):
    cc = classify_curve(pair_slant.base, n=64)
    assert cc.slant_helix
    assert not cc.general_helix


def test_too_few_samples():
    c = AnalyticCurve("t", "t^2", "t^3", (0.0, 1.0))
    with pytest.raises(TooFewSamplesError):
        classify_curve(c, n=8)


def test_pair_classify_bertrand(pair_wobble):
    pc = pair_classify(pair_wobble.base, pair_wobble.mate, n=64)
    assert pc.verdict == "bertrand"
    assert pc.evidence["bertrand"]["lambda_dev"] < 1e-9


def mannheim_fixture():
    """Integrate a Frenet system with kappa = kappa^2 + tau^2 (lambda = 1),
    then offset along the principal normal."""

    def kap(s):
        return 0.5 + 0.2 * np.sin(s)

    def tor(s):
        k = kap(s)
        return np.sqrt(k - k * k)

    def rhs(s, y):
        T, N, B = y[3:6], y[6:9], y[9:12]
        k, tau = kap(s), tor(s)
        return np.concatenate([T, k * N, -k * T + tau * B, -tau * N])

    y0 = np.concatenate([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1.0]])
    ss = np.linspace(0.0, 6.0, 1200)
    sol = solve_ivp(rhs, (0, 6), y0, t_eval=ss, rtol=1e-12, atol=1e-12,
                    method="DOP853")
    P = sol.y[:3].T
    N = sol.y[6:9].T
    return SampledCurve(ss, P), SampledCurve(ss, P + N)


def test_pair_classify_mannheim():
    gamma, partner = mannheim_fixture()
    pc = pair_classify(partner, gamma, n=64, tol=1e-4)
    assert pc.verdict == "mannheim"
    assert pc.evidence["mannheim"]["lambda_dev"] < 1e-6


def test_pair_classify_involute(helix):
    # involute: i(t) = g(t) + (c - s(t)) T(t) meets the tangents at right
    # angles, so the evolute/involute branch must fire
    from bertrand_kit.curves import frenet_apparatus

    ts = np.linspace(0.2, 5.8, 400)
    pts = []
    for t in ts:
        fd = frenet_apparatus(helix, t)
        s = 5.0 * t
        pts.append(helix.point(t) + (40.0 - s) * fd.T)
    pc = pair_classify(helix, SampledCurve(ts, np.array(pts)), n=64, tol=1e-4)
    assert pc.verdict == "involute_evolute"


def test_pair_classify_none_for_unrelated(helix):
    other = AnalyticCurve("t", "t^2/3", "sin(t)", (0.2, 5.8))
    pc = pair_classify(helix, other, n=64)
    assert pc.verdict == "none"


def test_indicatrix_pairs_are_not_special(pair_wobble):
    p = pair_wobble
    for axis in ("tangent", "binormal"):
        a = indicatrix_curve(p.base, axis, 400)
        b = indicatrix_curve(p.mate, axis, 400)
        pc = pair_classify(a, b, n=48, align="arclength")
        assert pc.verdict == "none"


def test_theorem_suite_all_pass(pair_wobble):
    rep = theorem_suite(pair_wobble, n=96)
    failing = [k for k, e in rep.entries.items() if not e.passed]
    assert rep.all_passed, failing


def test_theorem_suite_slant_pair(pair_slant):
    rep = theorem_suite(pair_slant, n=96)
    assert rep.all_passed
    assert rep.entries["th8"].max_residual < 1e-3
    assert rep.entries["th17"].max_residual < 1e-3
    assert "flags=[True, True, True]" in rep.entries["cr18"].note


def test_theorem_tolerance_override(pair_wobble):
    rep = theorem_suite(pair_wobble, n=48, tols={"th2": 1e-20})
    assert not rep.entries["th2"].passed
    assert rep.entries["th2"].tolerance == 1e-20
