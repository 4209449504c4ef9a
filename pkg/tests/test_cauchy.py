import math

import pytest

from flatjet.cauchy import (
    AnnulusDatum,
    QuadratureNotConverged,
    cauchy_transform,
    dbar_residual,
    profile_integral,
    support_demo,
    total_mass,
)

# Independent value of the profile integral over [1, 2] (mpmath, 30 digits).
PROFILE_INTEGRAL = 0.0070298584066096562


def test_profile_oracle_pinned():
    assert profile_integral(AnnulusDatum()) == pytest.approx(PROFILE_INTEGRAL, rel=1e-12)


def test_u0_matches_radial_reduction():
    u0 = cauchy_transform(AnnulusDatum(), 0.0)
    assert abs(u0 - (-PROFILE_INTEGRAL)) / PROFILE_INTEGRAL < 1e-3


def test_datum_invariants():
    with pytest.raises(ValueError):
        AnnulusDatum(resolution=8)
    with pytest.raises(ValueError):
        AnnulusDatum(rule="trapezoid")


def test_zero_amplitude():
    assert cauchy_transform(AnnulusDatum(amplitude=0.0), 0.3) == 0


def test_linearity():
    a = cauchy_transform(AnnulusDatum(amplitude=1.0, resolution=64), 0.2 + 0.1j)
    b = cauchy_transform(AnnulusDatum(amplitude=2.0, resolution=64), 0.2 + 0.1j)
    assert b == pytest.approx(2 * a, rel=1e-9)


def test_far_field_bound():
    d = AnnulusDatum(resolution=64)
    mass = math.pi * total_mass(d)  # integral of |f| dA
    for r in (4.0, 8.0, 16.0):
        u = cauchy_transform(d, r)
        assert abs(u) <= mass / (math.pi * (r - 2)) + 1e-12


def test_refinement_converges():
    errs = [abs(cauchy_transform(AnnulusDatum(resolution=r), 0.0) + PROFILE_INTEGRAL) for r in (16, 32, 64)]
    assert errs[0] > errs[1] > errs[2]


def test_low_resolution_flagged():
    with pytest.raises(QuadratureNotConverged):
        cauchy_transform(AnnulusDatum(resolution=16), 0.0, tol=1e-9)


def test_support_demo_report():
    report = support_demo()
    assert report.nonzero_in_hole
    assert report.relative_error < 1e-3
    assert all(abs(u) < 1e-6 for _, u in report.outside_values)
    errs = [e for _, e in report.refinement]
    assert errs == sorted(errs, reverse=True)
    assert "relative error" in "\n".join(report.lines())


def test_dbar_residual_small():
    d = AnnulusDatum()
    for z in (1.2, 1.1j, 0.5):
        assert abs(dbar_residual(d, z)) < 5e-2
