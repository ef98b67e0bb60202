import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from atrous.errors import BadParams, ZeroSequence
from atrous.registry import get
from atrous.sequences import FiniteSequence, translate
from atrous.spectrum import eval_ft
from atrous.tfmetrics import bank_tf_stats, classify_highpass, freq_spread, tf_stats, time_spread

from conftest import sequences

# (bank, filter, sigma_n2, sigma_w2, product) for the example banks
EXPECTED_SPREADS = [
    ("example-5.1", "h", 0.296, 1.08, 0.320),
    ("example-5.1", "g", 0.296, 1.08, 0.320),
    ("example-5.2", "h", 0.305, 1.06, 0.323),
    ("example-5.2", "g", 0.305, 1.06, 0.323),
    ("example-5.3", "h", 0.700, 0.543, 0.380),
    ("example-5.3", "g1", 1.218, 0.244, 0.297),
    ("example-5.3", "g2", 1.091, 0.303, 0.331),
    ("example-5.4", "h", 0.858, 0.674, 0.578),
    ("example-5.4", "g1", 2.007, 0.1712, 0.344),
    ("example-5.4", "g2", 1.686, 0.669, 1.128),
]


def power(x, xi):
    return abs(eval_ft(x, xi)) ** 2


def numeric_spread(x, mode):
    e = float(np.sum(x.taps ** 2))
    if mode == "lowpass":
        return 4 * np.pi ** 2 * quad(lambda t: t * t * power(x, t), -0.5, 0.5, limit=200)[0] / e
    if mode == "highpass":
        return 4 * np.pi ** 2 * quad(lambda t: t * t * power(x, t + 0.5), -0.5, 0.5, limit=200)[0] / e
    c = 2 * quad(lambda t: t * power(x, t), 0, 0.5, limit=200)[0] / e
    return 4 * np.pi ** 2 * 2 * quad(lambda t: (t - c) ** 2 * power(x, t), 0, 0.5, limit=200)[0] / e


def test_delta():
    s = tf_stats(FiniteSequence.delta())
    assert s.n0 == 0 and s.sigma_n2 == 0
    assert s.sigma_w2 == pytest.approx(np.pi ** 2 / 3, rel=1e-14)


def test_zero_sequence():
    with pytest.raises(ZeroSequence):
        tf_stats(FiniteSequence.zero())


def test_bad_mode():
    with pytest.raises(BadParams):
        freq_spread(FiniteSequence.delta(), "wide")


@pytest.mark.parametrize("name, key, sn, sw, prod", EXPECTED_SPREADS)
def test_expected_spreads(name, key, sn, sw, prod):
    s = bank_tf_stats(get(name))[key]
    assert s.sigma_n2 == pytest.approx(sn, rel=0.05)
    assert s.sigma_w2 == pytest.approx(sw, rel=0.05)
    assert s.product == pytest.approx(prod, rel=0.05)


def test_classification():
    assert classify_highpass(get("example-5.3").highpass[0]) == "bandpass"
    assert classify_highpass(get("example-5.3").highpass[1]) == "highpass"
    assert classify_highpass(get("haar").highpass[0]) == "highpass"
    forced = bank_tf_stats(get("example-5.3"), bandpass_high=True)
    assert forced["g2"].mode == "bandpass"


def test_haar_time_spread():
    assert time_spread(get("haar").lowpass) == (0.5, 0.25)


@given(sequences(max_len=12), st.integers(-50, 50))
def test_translation(x, k):
    a, b = tf_stats(x), tf_stats(translate(x, k))
    assert b.n0 == pytest.approx(a.n0 + k, abs=1e-9)
    assert b.sigma_n2 == pytest.approx(a.sigma_n2, rel=1e-9, abs=1e-9)
    assert b.sigma_w2 == pytest.approx(a.sigma_w2, rel=1e-12)


@given(sequences(max_len=12), st.floats(0.01, 100), st.sampled_from(["lowpass", "bandpass", "highpass"]))
def test_scaling(x, c, mode):
    a, b = tf_stats(x, mode), tf_stats(x * c, mode)
    assert b.sigma_n2 == pytest.approx(a.sigma_n2, rel=1e-9, abs=1e-12)
    assert b.sigma_w2 == pytest.approx(a.sigma_w2, rel=1e-9)


@given(st.lists(st.floats(-1, 1), min_size=1, max_size=6))
def test_symmetric_centroid(half):
    taps = np.array(half + half[::-1][1:])
    if np.max(np.abs(taps)) < 1e-3:
        return
    x = FiniteSequence.centered(taps)
    assert tf_stats(x).omega0 == 0.0
    assert tf_stats(x).n0 == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("name", ["example-5.1", "example-5.3", "example-5.4"])
@pytest.mark.parametrize("mode", ["lowpass", "bandpass", "highpass"])
def test_closed_form_matches_quadrature(name, mode):
    for x in get(name).filters():
        assert freq_spread(x, mode)[1] == pytest.approx(numeric_spread(x, mode), rel=1e-8)


def test_random_closed_form(rng):
    from conftest import random_sequence
    for _ in range(10):
        x = random_sequence(rng, max_len=20)
        for mode in ("lowpass", "bandpass", "highpass"):
            assert freq_spread(x, mode)[1] == pytest.approx(numeric_spread(x, mode), rel=1e-7)


def test_to_dict():
    d = tf_stats(get("example-5.1").lowpass).to_dict()
    assert set(d) == {"n0", "sigma_n2", "omega0", "sigma_w2", "product", "mode"}
