import random
from fractions import Fraction

import pytest

import bracketkit as bk

from conftest import general_position_points
from naive_checks import naive_bracket_ok, naive_container_ok, naive_mnet_ok


def test_mnet_trivial_anchors(collinear4):
    _, system = collinear4
    heavy = [m for m in system.ranges if m.bit_count() >= 2]
    fam = bk.make_mnet(system, heavy, Fraction(1), Fraction(1, 2))
    assert bk.verify_mnet(system, fam).passed
    empty_only = bk.make_mnet(system, [0], Fraction(1, 2), Fraction(1, 2))
    report = bk.verify_mnet(system, empty_only)
    assert not report.passed
    assert report.counterexample is not None


def test_mnet_collinear4_example(collinear4):
    _, system = collinear4
    fam = bk.make_mnet(system, [0b0011, 0b1100], Fraction(1, 2), Fraction(1, 2))
    report = bk.verify_mnet(system, fam)
    assert report.passed
    assert naive_mnet_ok(system, fam.pieces, fam.lam, fam.eps)


def test_container_trivial_anchors(collinear4):
    _, system = collinear4
    full = system.full_mask
    assert bk.verify_container(system, bk.make_container(system, [full], Fraction(1))).passed
    identity = bk.make_container(system, system.ranges, Fraction(0))
    assert bk.verify_container(system, identity).passed
    bad = bk.make_container(system, [0], Fraction(0))
    assert not bk.verify_container(system, bad).passed


def test_bracket_trivial_anchors(collinear4):
    _, system = collinear4
    full = system.full_mask
    fam = bk.make_bracket(system, [0, full], Fraction(1))
    assert bk.verify_bracket(system, fam).passed
    identity = bk.make_bracket(system, system.ranges, Fraction(0))
    assert bk.verify_bracket(system, identity).passed
    # n=4, F={0,1}, sets={X}, eps=1/4: no lower set at all
    one = bk.SetSystem.from_sets(4, [(0, 1)])
    missing_lower = bk.make_bracket(one, [one.full_mask], Fraction(1, 4))
    assert not bk.verify_bracket(one, missing_lower).passed


def test_wrong_hints_never_flip_the_verdict(collinear4):
    _, system = collinear4
    heavy = [m for m in system.ranges if m.bit_count() >= 2]
    wrong_witness = {i: len(heavy) - 1 for i in range(len(system.ranges))}
    fam = bk.MnetFamily(system, tuple(heavy), Fraction(1), Fraction(1, 2), wrong_witness)
    assert bk.verify_mnet(system, fam).passed
    cont = bk.ContainerFamily(system, (system.full_mask,), Fraction(1), {0: 99})
    assert bk.verify_container(system, cont).passed
    br = bk.BracketFamily(system, (0, system.full_mask), Fraction(1), {0: (1, 0)})
    assert bk.verify_bracket(system, br).passed


def _random_system(rng, n_lo=4, n_hi=8):
    n = rng.randint(n_lo, n_hi)
    count = rng.randint(1, 14)
    masks = [rng.randrange(1 << n) for _ in range(count)]
    return bk.SetSystem.from_masks(n, masks)


def test_verifiers_match_naive_on_random_families():
    rng = random.Random(42)
    for _ in range(120):
        system = _random_system(rng)
        n = system.n
        kind = rng.choice(["mnet", "container", "bracket"])
        size = rng.randint(0, 6)
        sets = [rng.randrange(1 << n) for _ in range(size)]
        if kind == "mnet":
            lam = Fraction(rng.randint(1, 4), 4)
            eps = Fraction(rng.randint(1, 4), 4)
            fam = bk.make_mnet(system, sets, lam, eps)
            assert bk.verify_mnet(system, fam).passed == naive_mnet_ok(system, fam.pieces, lam, eps)
        elif kind == "container":
            eps = Fraction(rng.randint(0, 4), 4)
            fam = bk.make_container(system, sets, eps)
            assert bk.verify_container(system, fam).passed == naive_container_ok(system, fam.covers, eps)
        else:
            eps = Fraction(rng.randint(0, 4), 4)
            fam = bk.make_bracket(system, sets, eps)
            assert bk.verify_bracket(system, fam).passed == naive_bracket_ok(system, fam.sets, eps)


def test_counterexample_is_first_in_canonical_order(collinear4):
    _, system = collinear4
    fam = bk.make_mnet(system, [], Fraction(1, 2), Fraction(1, 2))
    report = bk.verify_mnet(system, fam)
    assert not report.passed
    # first heavy range in canonical order is the full set
    assert report.counterexample[0] == system.ranges[0]


def test_witness_stats_present(collinear4):
    _, system = collinear4
    heavy = [m for m in system.ranges if m.bit_count() >= 2]
    fam = bk.make_mnet(system, heavy, Fraction(1), Fraction(1, 2))
    report = bk.verify_mnet(system, fam)
    assert report.witness_stats["count"] == report.checked
    assert report.witness_stats["min"] >= 1.0


def test_container_lower_bound_examples(collinear4):
    _, system = collinear4
    assert bk.container_lower_bound(system, Fraction(1, 2)) == 1
    assert bk.container_lower_bound(system, Fraction(3, 4)) == 1
    lb = bk.container_lower_bound(system, Fraction(1, 8))
    assert lb == 4
    # at eps=1/8 the slack floor(n/8)=0, so covers must equal ranges: the
    # minimal container is the identity family of size 8 >= 4
    identity = bk.make_container(system, system.ranges, Fraction(1, 8))
    assert bk.verify_container(system, identity).passed
    assert lb <= len(identity.covers)
    with pytest.raises(bk.InputError):
        bk.container_lower_bound(system, Fraction(1))


def test_lower_bound_below_any_accepted_family():
    rng = random.Random(7)
    pts, system = general_position_points(2, 7, 21)
    for eps in (Fraction(1, 7), Fraction(2, 7), Fraction(3, 7)):
        lb = bk.container_lower_bound(system, eps)
        cont = bk.build_container(system, eps, bk.default_provider())
        assert bk.verify_container(system, cont).passed
        assert lb <= len(cont.covers)
