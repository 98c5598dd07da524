"""Exhaustive reference checkers for family validity, used by the verifier
tests and the mutation-testing acceptance criterion.

Deliberately written with frozensets and plain loops: no bitmask tricks, no
witness maps, nothing shared with the library's verifiers beyond arithmetic.
"""

from fractions import Fraction


def _sets(masks, n):
    return [frozenset(i for i in range(n) if m >> i & 1) for m in masks]


def naive_mnet_ok(system, pieces, lam, eps):
    n = system.n
    lam = Fraction(lam)
    eps = Fraction(eps)
    ranges = _sets(system.ranges, n)
    piece_sets = _sets(pieces, n)
    for r in ranges:
        if Fraction(len(r)) < eps * n:
            continue
        if not any(p <= r and Fraction(len(p)) >= lam * len(r) for p in piece_sets):
            return False
    return True


def naive_container_ok(system, covers, eps):
    n = system.n
    eps = Fraction(eps)
    ranges = _sets(system.ranges, n)
    cover_sets = _sets(covers, n)
    for r in ranges:
        if not any(r <= c and Fraction(len(c - r)) <= eps * n for c in cover_sets):
            return False
    return True


def naive_bracket_ok(system, sets, eps):
    n = system.n
    eps = Fraction(eps)
    ranges = _sets(system.ranges, n)
    family = _sets(sets, n)
    for r in ranges:
        ok = False
        for lo in family:
            if not lo <= r:
                continue
            for hi in family:
                if r <= hi and Fraction(len(hi - lo)) <= eps * n:
                    ok = True
                    break
            if ok:
                break
        if not ok:
            return False
    return True
