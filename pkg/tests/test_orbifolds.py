"""Associated orbifold pairs, covering/inclusion checks, separation, boundary sets."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyporb.errors import CycleCollision, DomainError, EmptyInput, NotFound
from hyporb.maps import EntireMapSpec, get_map, postsingular_truncation
from hyporb.orbifolds import (
    AbsorbingDisc,
    DiscSurface,
    MarkedOrbifold,
    Plane,
    PlaneMinusDiscs,
    Window,
    annulus_count,
    boundary_set,
    build_associated_orbifold,
    check_covering_relation,
    check_holomorphic_inclusion,
    find_absorbing_disc,
    find_repelling_cycle,
    pairwise_separation,
    separation_report,
)

PI = math.pi


def _linear_half_map() -> EntireMapSpec:
    """Test stub z/2: no singular values, so the postsingular set is empty."""
    return EntireMapSpec(
        name="half",
        eval=lambda z: 0.5 * z,
        deriv=lambda z: 0.5 + 0j,
        deriv2=lambda z: 0j,
        critical_values=(),
        critical_value_witnesses=(),
        asymptotic_values=(),
        critical_points_in_disc=lambda c, r: [],
        preimages=lambda v, r_max, r_min: [2.0 * v] if r_min <= abs(2.0 * v) <= r_max else [],
    )


def test_build_pi_sinh_marks(pi_sinh_pair):
    base, lift = pi_sinh_pair
    for want in (0j, 1j * PI, -1j * PI):
        assert base.ramification(want, tol=1e-9) == 2
    assert all(nu == 2 for _, nu in base.marks)


def test_build_cosh_marks(cosh_pair, cosh_map):
    base, lift = cosh_pair
    trunc = postsingular_truncation(cosh_map, 8)
    for p in trunc.julia_points():
        assert base.ramification(p, tol=1e-9) == 2


def test_build_trivial_map_marks_only_cycle():
    stub = _linear_half_map()
    cycle = [4.0 + 0j]
    base, lift = build_associated_orbifold(stub, depth=4, cycle=cycle)
    assert isinstance(base.surface, Plane)
    assert base.marks == ((4.0 + 0j, 2),)
    assert base.ramification(1.0) == 1
    # the preimage 8 of the cycle point carries the quotient ramification
    assert lift.ramification(8.0 + 0j) == 2


def test_build_rejects_cycle_on_postsingular_set(pi_sinh_map):
    with pytest.raises(CycleCollision):
        build_associated_orbifold(pi_sinh_map, 10, cycle=[1j * PI])


def test_checks_pass_for_all_catalogue_pairs(
    cosh_map, pi_sinh_map, cosh_minus_one_map, cosh_pair, pi_sinh_pair, cosh_minus_one_pair
):
    for spec, (base, lift) in (
        (cosh_map, cosh_pair),
        (pi_sinh_map, pi_sinh_pair),
        (cosh_minus_one_map, cosh_minus_one_pair),
    ):
        assert check_covering_relation(spec, base, lift).passed
        assert check_holomorphic_inclusion(lift, base).passed
        assert all(nu == 2 for _, nu in base.marks)


def test_swapped_inclusion_fails(cosh_pair):
    base, lift = cosh_pair
    result = check_holomorphic_inclusion(base, lift)
    assert not result.passed
    assert result.witnesses


def test_identical_orbifold_inclusion_passes(cosh_pair):
    base, _ = cosh_pair
    assert check_holomorphic_inclusion(base, base).passed


def test_covering_identity_at_critical_witness(cosh_map, cosh_pair):
    base, lift = cosh_pair
    # nu(f(0)) = nu(1) = 2 equals deg(f, 0) * nu_tilde(0) = 2 * 1
    assert base.ramification(1.0 + 0j) == 2
    assert lift.ramification(0j) == 1


def test_deepening_is_conservative(cosh_map):
    cycle = find_repelling_cycle(cosh_map, 1)
    base6, _ = build_associated_orbifold(cosh_map, 6, cycle=cycle)
    base7, _ = build_associated_orbifold(cosh_map, 7, cycle=cycle)
    for p, nu in base6.marks:
        assert base7.ramification(p, tol=1e-9) >= nu


def test_boundary_set_cosh_window(cosh_map, cosh_pair):
    base, lift = cosh_pair
    bset = boundary_set(cosh_map, lift, base, Window(r_max=8.0, r_min=1.0))
    assert len(bset) > 0
    assert not bset.truncation_warning
    assert all(tag == "extra_ramification" for tag in bset.provenance)
    # reflected orbit points are genuine extra-ramification points
    assert any(abs(p + 1.5430806348152437) < 1e-6 for p in bset.points)
    # preimages on the period lattice near 2 pi i
    assert any(abs(p - (1.0 + 2j * PI)) < 1e-6 for p in bset.points)
    for p in bset.points:
        assert base.ramification(p, tol=1e-9) == 1


def test_boundary_set_identity_pair_empty(cosh_pair, cosh_map):
    base, _ = cosh_pair
    bset = boundary_set(cosh_map, base, base, Window(r_max=10.0))
    assert len(bset) == 0


def test_boundary_set_truncation_warning(cosh_map, cosh_pair):
    # the deepest resolvable window ends at the second-largest mark modulus
    base, lift = cosh_pair
    bset = boundary_set(cosh_map, lift, base, Window(r_max=500.0))
    assert bset.truncation_warning
    bset2 = boundary_set(cosh_map, lift, base, Window(r_max=150.0))
    assert not bset2.truncation_warning


def test_complete_truncation_never_warns(pi_sinh_map, pi_sinh_pair):
    # every pi*sinh singular orbit closes up, so no marks can be missing
    base, lift = pi_sinh_pair
    assert base.truncation_complete
    bset = boundary_set(pi_sinh_map, lift, base, Window(r_max=300.0))
    assert not bset.truncation_warning
    assert len(bset) > 0


def test_separation_examples(cosh_map, pi_sinh_map):
    assert pairwise_separation([1 + 0j, -1 + 0j]) == 2.0
    trunc = postsingular_truncation(cosh_map, 6)
    rep = separation_report(trunc, 2.0, cosh_map)
    assert 0.3519 <= rep.epsilon_star <= 0.3520
    assert rep.annulus_count_M == 3
    assert rep.orbit_crit_bound_c == 1
    assert rep.max_local_degree == 2
    trunc2 = postsingular_truncation(pi_sinh_map, 10)
    rep2 = separation_report(trunc2, 2.0, pi_sinh_map)
    assert abs(rep2.epsilon_star - 1.0) < 1e-9


def test_separation_empty_input():
    with pytest.raises(EmptyInput):
        pairwise_separation([])


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e3), st.permutations(range(4)))
def test_separation_scale_and_permutation_invariance(t, perm):
    pts = [1 + 0j, -1 + 0j, 1.5430806348152437 + 0j, 2.4463520074491622 + 0j]
    scaled = [t * pts[i] for i in perm]
    assert abs(pairwise_separation(scaled) - pairwise_separation(pts)) < 1e-12
    assert annulus_count(scaled, 2.0) == annulus_count(pts, 2.0)


def test_absorbing_disc_examples(cosh_minus_one_map):
    disc = find_absorbing_disc(cosh_minus_one_map, 0j)
    assert disc.radius == 0.5
    assert abs(disc.boundary_sup - 0.12762596520638078) < 1e-12
    with pytest.raises(NotFound):
        find_absorbing_disc(cosh_minus_one_map, 0j, r_grid=(3.0,))
    stub = _linear_half_map()
    d2 = find_absorbing_disc(stub, 0j, r_grid=(1.0,))
    assert d2.radius == 1.0 and abs(d2.boundary_sup - 0.5) < 1e-12


def test_absorbing_disc_rejects_repelling(cosh_minus_one_map):
    with pytest.raises(DomainError):
        find_absorbing_disc(cosh_minus_one_map, 1.6161330104745745 + 0j)


def test_find_repelling_cycle_examples(cosh_map, pi_sinh_map, cosh_minus_one_map):
    import cmath

    cyc = find_repelling_cycle(cosh_map, 1)
    z = cyc[0]
    assert abs(cmath.cosh(z) - z) < 1e-9
    assert abs(cmath.sinh(z)) > 1 + 1e-6
    # the fixed point 0 of pi*sinh is postsingular, so a tight box around 0 fails
    with pytest.raises(NotFound):
        find_repelling_cycle(pi_sinh_map, 1, seed_box=(-0.2 - 0.2j, 0.2 + 0.2j))
    # the fixed point 0 of cosh - 1 is attracting, so it is filtered too
    with pytest.raises(NotFound):
        find_repelling_cycle(cosh_minus_one_map, 1, seed_box=(-0.2 - 0.2j, 0.2 + 0.2j))


def test_cosh_minus_one_surface(cosh_minus_one_pair):
    base, lift = cosh_minus_one_pair
    assert isinstance(base.surface, PlaneMinusDiscs)
    assert any(abs(c) < 1e-9 and r == 0.5 for c, r in base.surface.discs)
    assert isinstance(lift.surface, PlaneMinusDiscs)
    assert len(lift.surface.discs) > 1
    # boundary sampling of the lift discs that are interior to the base surface
    bset = boundary_set(
        get_map("cosh_minus_one"), lift, base, Window(r_max=10.0, r_min=0.1)
    )
    assert any(tag == "surface_boundary" for tag in bset.provenance)


def test_orbifold_json_round_trip(cosh_pair, cosh_minus_one_pair):
    for pair in (cosh_pair, cosh_minus_one_pair):
        for orb in pair:
            data = orb.to_json()
            back = MarkedOrbifold.from_json(data)
            assert back.marks == orb.marks
            assert back.truncation_depth == orb.truncation_depth
            assert type(back.surface) is type(orb.surface)


def test_marked_orbifold_validation():
    with pytest.raises(DomainError):
        MarkedOrbifold(Plane(), ((0j, 1),))
    with pytest.raises(DomainError):
        MarkedOrbifold(Plane(), ((0j, 2), (1e-12 + 0j, 2)))
    with pytest.raises(DomainError):
        MarkedOrbifold(PlaneMinusDiscs(((0j, 1.0),)), ((0.5 + 0j, 2),))
    with pytest.raises(DomainError):
        MarkedOrbifold(DiscSurface(0j, 1.0), ((2.0 + 0j, 2),))
