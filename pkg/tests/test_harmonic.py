import math

import pytest

import oracles
from lerw_edge.harmonic import (
    boundary_sign,
    crossing_mass,
    escape_R,
    escape_R_boundary,
    escape_boundary_profile,
    phi,
    phi_from_profile,
    slit_points,
)
from lerw_edge.lattice import build_domain


def test_boundary_sign_quadrant_rule():
    assert boundary_sign((3, -1)) == -1
    assert boundary_sign((3, 1)) == 1
    assert boundary_sign((3, 0)) == 1  # strict inequalities: axis is +1
    assert boundary_sign((0, -3)) == 1
    assert boundary_sign((1, -3)) == -1
    assert boundary_sign((-3, -3)) == 1


def test_slit_points(d2):
    assert slit_points(d2) == {(0, 0), (1, 0), (2, 0)}


def test_escape_R_matches_dense_oracle():
    for n in (2, 3, 4):
        assert escape_R(build_domain(n)) == pytest.approx(
            oracles.escape_R(n), rel=1e-12
        )


def test_escape_R_decreasing_small_range():
    vals = [escape_R(build_domain(n)) for n in (2, 3, 4, 5, 6, 8)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_profile_partitions_escape(d2, d3):
    for d in (d2, d3):
        prof = escape_boundary_profile(d)
        total = sum(abs(prof[z]) for z in d.left_boundary)
        assert total == pytest.approx(escape_R(d), rel=1e-10)


def test_profile_sign_rule(d3):
    prof = escape_boundary_profile(d3)
    for z, v in prof.items():
        if v == 0.0:
            continue
        if z[0] > 0 and z[1] < 0:
            assert v < 0
        else:
            assert v > 0


def test_profile_reflection_symmetry(d3):
    prof = escape_boundary_profile(d3)
    for (x, y), v in prof.items():
        if x <= 0:
            assert abs(v) == pytest.approx(abs(prof[(x, -y)]), rel=1e-12)


def test_escape_R_boundary_single_point(d2):
    prof = escape_boundary_profile(d2)
    assert escape_R_boundary(d2, (-2, 0)) == prof[(-2, 0)]
    with pytest.raises(ValueError):
        escape_R_boundary(d2, (0, 0))


def test_profile_blocked_point_is_zero(d2):
    # the right-boundary point on the axis sits behind the slit
    prof = escape_boundary_profile(d2)
    assert prof[(3, 0)] == 0.0


def test_phi_diagonal_and_symmetry(d2):
    z1, z2 = (-2, 0), (3, 1)
    assert phi(d2, z1, z1) == 0.0
    assert phi(d2, z1, z2) == pytest.approx(phi(d2, z2, z1), rel=1e-15)
    with pytest.raises(ValueError):
        phi(d2, (0, 0), z2)


def test_phi_scaled_stabilizes_for_midpoints():
    # opposite-side midpoints: n^3 Phi_n approaches a positive constant
    # (two per-point hitting factors of order n^-3/2 each)
    vals = []
    for n in (8, 16, 32):
        d = build_domain(n)
        prof = escape_boundary_profile(d)
        vals.append(n**3 * phi_from_profile(prof, (-n, 0), (n + 1, 0)))
    assert all(v > 0 for v in vals)
    assert abs(vals[2] - vals[1]) < abs(vals[1] - vals[0])
    assert abs(vals[2] / vals[1] - 1.0) < 0.02


def test_crossing_mass_matches_dense_oracle():
    for n in (2, 3, 4):
        assert crossing_mass(build_domain(n)) == pytest.approx(
            oracles.crossing_mass(n), rel=1e-12
        )


def test_crossing_mass_bounds(d3):
    f = crossing_mass(d3)
    assert 0.0 < f < len(d3.left_boundary)


def test_crossing_mass_cauchy():
    vals = [crossing_mass(build_domain(n)) for n in (4, 8, 16, 32)]
    gaps = [abs(b - a) for a, b in zip(vals, vals[1:])]
    assert gaps[0] > gaps[1] > gaps[2]
