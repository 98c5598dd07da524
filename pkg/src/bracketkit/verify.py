"""Brute-force verifiers for Mnet/container/bracket families, plus the
packing-based container lower bound.

These are the trust anchor: every construction re-verifies its output here
before returning it.  Witness maps attached by constructions are used only
as hints; each hinted set is re-checked and a full scan runs whenever the
hint fails, so a wrong hint can never turn an invalid family valid.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .packing import greedy_delta_packing
from .rationals import ceil_frac, floor_frac


@dataclass(frozen=True)
class VerifyReport:
    passed: bool
    checked: int
    counterexample: object
    witness_stats: dict

    def __bool__(self):
        return self.passed


def _stats(values):
    if not values:
        return {"count": 0}
    floats = [float(v) for v in values]
    return {
        "count": len(floats),
        "min": min(floats),
        "max": max(floats),
        "mean": sum(floats) / len(floats),
    }


def verify_mnet(system, family):
    """Check: every range with |R| >= eps*n contains a piece of size >= lam*|R|."""
    n = system.n
    heavy_at = ceil_frac(family.eps * n)
    lam = Fraction(family.lam)
    pieces = family.pieces
    witness = family.witness or {}
    ratios = []
    checked = 0
    for idx, mask in enumerate(system.ranges):
        size = mask.bit_count()
        if size < heavy_at:
            continue
        checked += 1
        found = None
        hint = witness.get(idx)
        if hint is not None and 0 <= hint < len(pieces):
            piece = pieces[hint]
            if (piece & mask) == piece and piece.bit_count() * lam.denominator >= lam.numerator * size:
                found = piece
        if found is None:
            for piece in pieces:
                if (piece & mask) == piece and piece.bit_count() * lam.denominator >= lam.numerator * size:
                    found = piece
                    break
        if found is None:
            return VerifyReport(
                False,
                checked,
                (mask, f"no piece of size >= {lam}*{size} inside range"),
                _stats(ratios),
            )
        if size:
            ratios.append(Fraction(found.bit_count(), size))
    return VerifyReport(True, checked, None, _stats(ratios))


def verify_container(system, family):
    """Check: every range F has a cover C with F subset of C and |C \\ F| <= eps*n."""
    n = system.n
    slack_cap = floor_frac(family.eps * n)
    covers = family.covers
    witness = family.witness or {}
    slacks = []
    checked = 0
    for idx, mask in enumerate(system.ranges):
        checked += 1
        found = None
        hint = witness.get(idx)
        if hint is not None and 0 <= hint < len(covers):
            cover = covers[hint]
            if (mask & cover) == mask and (cover & ~mask).bit_count() <= slack_cap:
                found = cover
        if found is None:
            for cover in covers:
                if (mask & cover) == mask and (cover & ~mask).bit_count() <= slack_cap:
                    found = cover
                    break
        if found is None:
            return VerifyReport(
                False,
                checked,
                (mask, f"no cover within slack {slack_cap}"),
                _stats(slacks),
            )
        slacks.append((found & ~mask).bit_count())
    return VerifyReport(True, checked, None, _stats(slacks))


def verify_bracket(system, family):
    """Check: every range F has sets B-, B+ with B- <= F <= B+, |B+ \\ B-| <= eps*n."""
    n = system.n
    slack_cap = floor_frac(family.eps * n)
    sets = family.sets
    pairing = family.pairing or {}
    slacks = []
    checked = 0
    for idx, mask in enumerate(system.ranges):
        checked += 1
        found = None
        hint = pairing.get(idx)
        if hint is not None:
            lo_i, hi_i = hint
            if 0 <= lo_i < len(sets) and 0 <= hi_i < len(sets):
                lo, hi = sets[lo_i], sets[hi_i]
                if (lo & mask) == lo and (mask & hi) == mask and (hi & ~lo).bit_count() <= slack_cap:
                    found = (lo, hi)
        if found is None:
            lowers = [s for s in sets if (s & mask) == s]
            uppers = [s for s in sets if (mask & s) == mask]
            for lo in lowers:
                for hi in uppers:
                    if (hi & ~lo).bit_count() <= slack_cap:
                        found = (lo, hi)
                        break
                if found is not None:
                    break
        if found is None:
            return VerifyReport(
                False,
                checked,
                (mask, f"no bracket pair within slack {slack_cap}"),
                _stats(slacks),
            )
        slacks.append((found[1] & ~found[0]).bit_count())
    return VerifyReport(True, checked, None, _stats(slacks))


def container_lower_bound(system, eps):
    """Size of a greedy maximal packing at threshold 2*eps*n.

    Two ranges sharing a cover under slack eps*n differ by at most 2*eps*n
    elements, so members of a packing with pairwise symmetric difference
    strictly above 2*eps*n occupy distinct covers: the packing size lower
    bounds the size of any family accepted by verify_container at eps.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise InputError(f"eps must be in (0,1), got {eps}")
    threshold = min(system.n, floor_frac(2 * eps * system.n))
    packing = greedy_delta_packing(system, threshold)
    return len(packing.members)
