import math
from fractions import Fraction

import numpy as np
import pytest

from walshqt import experiments as ex
from walshqt.analysis import weak_constant
from walshqt.dense import dense_lp_norm
from walshqt.dyadic import lp_norm
from walshqt.phase_plane import Quartile
from walshqt.quartile_operator import apply
from walshqt.walsh import wave_packet


def test_power_family_is_normalised_and_decreasing():
    for p in ex.DEFAULT_P1:
        x = ex.power_family(p, 10, -10, 1)
        assert dense_lp_norm(x, 2.0**-10, p) == pytest.approx(1)
        body = x[: 1 << 10]
        assert np.all(np.diff(body) <= 0)
        assert not np.any(x[1 << 10 :])
    with pytest.raises(ValueError):
        ex.power_family(Fraction(3, 2), 10, -8, 1)


def test_single_quartile_weak_constant_closed_form():
    # V = 2**(-k/2) w_s3 has modulus 2**-k on I_s, so the weak 2/3 constant is 2**-k 2**(3k/2)
    for k in (-2, 0, 2):
        s = Quartile.make(k, 1, 3)
        V = apply([s], wave_packet(s.grandchild(1)), wave_packet(s.grandchild(2)))
        assert weak_constant(V, Fraction(2, 3)) == pytest.approx(2.0 ** (k / 2))


def test_zero_inputs_give_zero_constants():
    rep = ex.endpoint_report(family="zero", depth=8, band_width=6, samples=1)
    assert all(r["K"] == 0 for r in rep["rows"])
    rep6 = ex.signed_report(family="zero", depth=8, band_width=6, samples=1)
    assert all(r["K"] == 0 for r in rep6["rows"])


def test_dilation_by_powers_of_four_leaves_constants_unchanged():
    a = ex.endpoint_report(depth=8, band_width=6, samples=1)
    b = ex.endpoint_report(depth=8, band_width=6, samples=1, dilate=-1)
    for x, y in zip(a["rows"], b["rows"]):
        assert x["K"] == pytest.approx(y["K"], rel=1e-10)
    assert b["config"]["dilate_power4"] == -1


def test_endpoint_rejects_exponents_outside_the_range():
    with pytest.raises(ValueError):
        ex.endpoint_report([Fraction(2)], depth=6, band_width=4)
    with pytest.raises(ValueError):
        ex.signed_report([Fraction(1)], depth=6, band_width=4)


def test_reports_are_deterministic():
    for name in ex.SUITES:
        a = ex.dumps(ex.run_suite(name, 3, 4))
        b = ex.dumps(ex.run_suite(name, 3, 4))
        assert a == b
    assert ex.dumps(ex.conjecture_report(5, 1)) == ex.dumps(ex.conjecture_report(5, 1))


def test_parallel_runs_match_serial_runs():
    assert ex.dumps(ex.run_suite("projections", 2, 6, jobs=2)) == ex.dumps(ex.run_suite("projections", 2, 6))


def test_unknown_suite():
    with pytest.raises(KeyError):
        ex.run_suite("nope", 0, 1)


def test_reports_embed_their_configuration():
    rep = ex.run_suite("orthogonality", 9, 3)
    assert rep["config"] == {"seed": 9, "trials": 3}
    assert "timestamp" not in ex.dumps(rep)


def test_conjecture_probe_records_a_running_maximum():
    rep = ex.conjecture_report(12, 0)
    running = [r["running_max"] for r in rep["records"]]
    assert running == sorted(running)
    assert rep["summary"]["max_ratio"] == running[-1] > 0
