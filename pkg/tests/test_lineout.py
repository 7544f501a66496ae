import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chiral_light import gaussian as gs
from chiral_light.lineout import (
    CSV_COLUMNS,
    DOUBLED_FACTOR,
    LineParams,
    frequency_resolution,
    output_correlators,
    output_covariance,
    output_log_negativity,
)
from chiral_light.model import EffectiveModel


def lattice():
    m = EffectiveModel(g1=0.2, g2=0.08, Delta=0.01, J=0.006, Gamma=1.0, N=10, q_index=1)
    return m, gs.lattice_steady(m)


def test_coefficient_and_resolution():
    lp = LineParams(gamma_line=0.3, N=10)
    assert lp.coupling_coefficient == pytest.approx(math.sqrt(0.3 / (10 * math.pi**2)))
    assert frequency_resolution(lp) == pytest.approx(2 * math.pi / 10)
    doubled = LineParams(gamma_line=0.3, N=10, factor=DOUBLED_FACTOR)
    assert doubled.scale == pytest.approx(4 * lp.scale)


def test_output_scales_moments():
    m, blocks = lattice()
    lp = LineParams(gamma_line=0.5, N=m.N)
    out = output_correlators(blocks, lp)
    assert len(out) == len(blocks)
    for o, b in zip(out, blocks):
        aa, nk, nkp = b.moments()
        assert o.out_nk == pytest.approx(lp.scale * nk)
        assert o.out_aa == pytest.approx(lp.scale * aa)
        assert o.phase_rate == pytest.approx(b.k + b.k_partner)
        assert len(o.row()) == len(CSV_COLUMNS)
        assert o.en_upper_bound == pytest.approx(gs.log_negativity_sympl(b))


def test_no_line_coupling_gives_vacuum():
    _, blocks = lattice()
    out = output_covariance(blocks[1], LineParams(gamma_line=0.0, N=10))
    np.testing.assert_allclose(out.gamma, 0.5 * np.eye(4))


def test_strong_coupling_rejected():
    _, blocks = lattice()
    with pytest.raises(ValueError):
        output_covariance(blocks[1], LineParams(gamma_line=200.0, N=1))


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 0.95), st.floats(-1, 1), st.floats(0.0, 1.0))
def test_output_is_physical_and_bounded(eta, E, s):
    block = gs.PairCovariance(gs.two_mode_covariance(eta, E))
    lp = LineParams(gamma_line=s * 10 * math.pi**2, N=10)
    assert lp.scale == pytest.approx(s)
    out = output_covariance(block, lp)
    assert gs.physicality_margin(out.gamma) >= -1e-9
    assert output_log_negativity(block, lp) <= gs.log_negativity_sympl(block) + 1e-12
