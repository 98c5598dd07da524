"""Construction stack for Mnets, containers and uniform brackets.

The pipeline is: a base provider hands out verified Lambda-heavy Mnets for
arbitrary subsystems (greedy cover with a truncation fallback); boosting
turns 1/2-threshold Mnets into eps-threshold ones; complementation swaps
Mnets and containers; a removal recursion builds containers for small
ranges; bootstrapping lifts those to heavy Mnets on a size band; banding
over a geometric size ladder yields Mnets of arbitrary heaviness, full
container families and brackets.  Every construction re-verifies its output
before returning it and never returns an unverified family.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import bitsets
from .errors import InputError, InternalInvariantError, PreconditionFailure
from .families import make_bracket, make_container, make_mnet
from .packing import greedy_delta_packing
from .rationals import ceil_frac, floor_frac
from .setsystem import SetSystem, canonical_sort, complement_family, filter_by_size, project
from .verify import verify_container, verify_mnet, verify_bracket

HALF = Fraction(1, 2)


def _checked_mnet(family, label):
    report = verify_mnet(family.base, family)
    if not report.passed:
        raise InternalInvariantError(f"{label} failed self-verification: {report.counterexample}")
    return family


def _checked_container(family, label):
    report = verify_container(family.base, family)
    if not report.passed:
        raise InternalInvariantError(f"{label} failed self-verification: {report.counterexample}")
    return family


# ---------------------------------------------------------------------------
# Base provider
# ---------------------------------------------------------------------------


def base_mnet(system, lam, eps, pair_cap=64):
    """Greedy-cover Mnet: every range of size >= eps*n gets a contained piece
    of size >= lam*|range|.

    Candidate pieces are the heavy ranges themselves plus pairwise
    intersections of the first ``pair_cap`` heavy ranges (canonical order);
    the greedy loop picks the candidate serving the most uncovered heavy
    ranges.  Any range left unserved falls back to its own prefix truncation,
    so the construction always succeeds; candidate capping only affects size.
    """
    lam = Fraction(lam)
    eps = Fraction(eps)
    if not 0 < lam <= 1:
        raise InputError(f"lam must be in (0,1], got {lam}")
    if eps <= 0:
        raise InputError(f"eps must be positive, got {eps}")
    n = system.n
    heavy_at = ceil_frac(eps * n)
    heavy = [(idx, mask) for idx, mask in enumerate(system.ranges) if mask.bit_count() >= heavy_at]
    if not heavy:
        return _checked_mnet(make_mnet(system, [], lam, eps, witness={}), "base_mnet")
    heavy_masks = [m for _, m in heavy]
    cands = set(heavy_masks)
    prefix = heavy_masks[:pair_cap]
    for i in range(len(prefix)):
        for j in range(i + 1, len(prefix)):
            cands.add(prefix[i] & prefix[j])
    cands = canonical_sort(cands, n)

    serves = _serving_matrix(cands, heavy_masks, lam, n)
    keep = serves.any(axis=1)
    cands = [c for c, k in zip(cands, keep) if k]
    serves = serves[keep]

    chosen = []
    assignment = {}
    uncovered = np.ones(len(heavy_masks), dtype=bool)
    counts = serves.sum(axis=1)
    while uncovered.any() and len(cands):
        best = int(np.argmax(counts))
        if counts[best] <= 0:
            break
        piece = cands[best]
        newly = serves[best] & uncovered
        for j in np.flatnonzero(newly):
            assignment[heavy[j][0]] = piece
        uncovered &= ~newly
        counts = counts - (serves[:, newly].sum(axis=1))
        chosen.append(piece)
    for j in np.flatnonzero(uncovered):
        idx, mask = heavy[j]
        want = ceil_frac(lam * mask.bit_count())
        piece = _prefix_bits(mask, want)
        chosen.append(piece)
        assignment[idx] = piece
    pieces = list(dict.fromkeys(chosen))
    position = {p: i for i, p in enumerate(pieces)}
    witness = {idx: position[piece] for idx, piece in assignment.items()}
    return _checked_mnet(make_mnet(system, pieces, lam, eps, witness=witness), "base_mnet")


def _serving_matrix(cands, ranges, lam, n):
    """serves[i, j] = cands[i] is inside ranges[j] and heavy enough for it."""
    cand_sizes = np.array([c.bit_count() for c in cands], dtype=np.int64)
    range_sizes = np.array([r.bit_count() for r in ranges], dtype=np.int64)
    if lam.numerator >= 1 << 30 or lam.denominator >= 1 << 30:
        raise InputError("heaviness fraction too large for the fast path")
    size_ok = cand_sizes[:, None] * lam.denominator >= range_sizes[None, :] * lam.numerator
    packed_c = bitsets.pack_masks(cands, n)
    packed_r = bitsets.pack_masks(ranges, n)
    return bitsets.subset_matrix(packed_c, packed_r) & size_ok


def _prefix_bits(mask, count):
    out = 0
    remaining = mask
    for _ in range(count):
        low = remaining & -remaining
        out |= low
        remaining ^= low
    return out


class PropertyMProvider:
    """Produces verified fixed-heaviness Mnets for arbitrary subsystems.

    ``heaviness`` plays the role of the fixed constant (1/2 for halfspace-like
    systems); ``bound_log`` records (eps, produced size) for every call.
    """

    def __init__(self, heaviness=HALF, pair_cap=64):
        heaviness = Fraction(heaviness)
        if not 0 < heaviness < 1:
            raise InputError(f"provider heaviness must be in (0,1), got {heaviness}")
        self.heaviness = heaviness
        self.pair_cap = pair_cap
        self.bound_log = []

    def mnet(self, system, eps):
        family = base_mnet(system, self.heaviness, eps, pair_cap=self.pair_cap)
        self.bound_log.append((Fraction(eps), len(family.pieces)))
        return family


def default_provider():
    return PropertyMProvider()


# ---------------------------------------------------------------------------
# eps-boosting
# ---------------------------------------------------------------------------


def boost_epsilon(system, provider, eps, eta, run_log=None):
    """Turn the provider's 1/2-threshold Mnets into an eps-threshold Mnet.

    Size bands eps_i = (1+eta')^i * eps with eta' = min(1/4, eta/2) are each
    covered by a maximal packing at separation eta'*eps_i*n among ranges below
    the band top; every band range inherits a piece from the provider's
    1/2-Mnet of the projection onto its nearest packing member.  The output
    heaviness is provider.heaviness * (1 - eta).
    """
    eps = Fraction(eps)
    eta = Fraction(eta)
    if not 0 < eps < 1:
        raise InputError(f"eps must be in (0,1), got {eps}")
    if not 0 < eta < 1:
        raise InputError(f"eta must be in (0,1), got {eta}")
    n = system.n
    eta_p = min(Fraction(1, 4), eta / 2)
    lam_out = provider.heaviness * (1 - eta)
    t = 0
    power = Fraction(1)
    inv = 1 / eps
    while power < inv:
        power *= 1 + eta_p
        t += 1
    bands = [(i, (1 + eta_p) ** i * eps, eta_p * (1 + eta_p) ** i * eps) for i in range(t + 1)]
    if run_log is not None:
        run_log.append(
            {"op": "boost", "eta_prime": eta_p, "t": t, "eps": eps, "eta": eta, "bands": bands}
        )
    pieces = []
    witness = {}
    size_of = [m.bit_count() for m in system.ranges]
    for i in range(1, t + 1):
        eps_lo, eps_hi = bands[i - 1][1], bands[i][1]
        delta_i = bands[i][2]
        lo_int = ceil_frac(eps_lo * n)
        if i < t:
            hi_int = ceil_frac(eps_hi * n) - 1
        else:
            hi_int = n
        if lo_int > hi_int:
            continue
        band_idx = [
            j for j, s in enumerate(size_of) if lo_int <= s <= hi_int and j not in witness
        ]
        if not band_idx:
            continue
        packing = greedy_delta_packing(system, floor_frac(delta_i * n), shallow_cap=hi_int)
        members = packing.members
        if not members:
            continue
        packed_members = bitsets.pack_masks(members, n)
        member_cache = {}
        for j in band_idx:
            mask = system.ranges[j]
            row = bitsets.pack_masks([mask], n)[0]
            dists = bitsets.symdiff_counts(row, packed_members)
            p_i = int(np.argmin(dists))
            member = members[p_i]
            if member not in member_cache:
                proj = project(system, member)
                fam = provider.mnet(proj.system, HALF)
                lookup = {m: k for k, m in enumerate(proj.system.ranges)}
                member_cache[member] = (proj, fam, lookup)
            proj, fam, lookup = member_cache[member]
            local = 0
            for pos, orig in enumerate(proj.original_indices):
                if mask >> orig & 1:
                    local |= 1 << pos
            piece_local = _mnet_witness_piece(fam, lookup[local], local)
            piece = proj.lift_mask(piece_local)
            witness[j] = piece
            pieces.append(piece)
    ordered = list(dict.fromkeys(pieces))
    position = {p: i for i, p in enumerate(ordered)}
    witness_idx = {j: position[p] for j, p in witness.items()}
    fam = make_mnet(system, ordered, lam_out, eps, witness=witness_idx)
    return _checked_mnet(fam, "boost_epsilon")


def _mnet_witness_piece(family, range_idx, range_mask):
    """Fetch (hint first, then scan) the piece serving a given base range."""
    lam = family.lam
    size = range_mask.bit_count()
    hint = (family.witness or {}).get(range_idx)
    if hint is not None:
        piece = family.pieces[hint]
        if (piece & range_mask) == piece and piece.bit_count() * lam.denominator >= lam.numerator * size:
            return piece
    for piece in family.pieces:
        if (piece & range_mask) == piece and piece.bit_count() * lam.denominator >= lam.numerator * size:
            return piece
    raise InternalInvariantError("verified Mnet has no piece for a heavy range")


# ---------------------------------------------------------------------------
# Complement duality
# ---------------------------------------------------------------------------


def mnet_to_container(system, mnet, delta0, lam):
    """Complement a heavy Mnet of the complemented small ranges into a container.

    Input contract (verified, refused with a counterexample on failure): the
    pieces form a lam-heavy (1-delta0)-Mnet for the complements of the ranges
    of size <= delta0*n.  The complements of the pieces are then a
    (1 - lam + lam*delta0)-container for those small ranges.
    """
    delta0 = Fraction(delta0)
    lam = Fraction(lam)
    if not 0 < delta0 <= 1:
        raise InputError(f"delta0 must be in (0,1], got {delta0}")
    if not 0 < lam <= 1:
        raise InputError(f"lam must be in (0,1], got {lam}")
    n = system.n
    small = filter_by_size(system, upper=delta0 * Fraction(n))
    comp = complement_family(small)
    candidate = make_mnet(comp, mnet.pieces, lam, 1 - delta0)
    report = verify_mnet(comp, candidate)
    if not report.passed:
        raise PreconditionFailure(
            f"input is not a {lam}-heavy {1 - delta0}-Mnet of the complemented small ranges: "
            f"counterexample {report.counterexample}",
            report,
        )
    full = system.full_mask
    covers = [full ^ p for p in candidate.pieces]
    eps_out = 1 - lam + lam * delta0
    slack_cap = floor_frac(eps_out * n)
    witness = {}
    for idx, mask in enumerate(small.ranges):
        for c_i, cover in enumerate(covers):
            if (mask & cover) == mask and (cover & ~mask).bit_count() <= slack_cap:
                witness[idx] = c_i
                break
    fam = make_container(small, covers, eps_out, witness=witness)
    return _checked_container(fam, "mnet_to_container")


def container_to_mnet(system, container, delta0, lam):
    """Complement a container for small ranges into a heavy Mnet of their complements.

    Input contract (verified): covers form a (1-lam)-container for the ranges
    of size <= delta0*n; needs lam > delta0, else the resulting heaviness
    lam - delta0 would be nonpositive.
    """
    delta0 = Fraction(delta0)
    lam = Fraction(lam)
    if not 0 < delta0 <= 1:
        raise InputError(f"delta0 must be in (0,1], got {delta0}")
    if lam <= delta0:
        raise InputError(f"need lam > delta0, got lam={lam}, delta0={delta0}")
    if lam > 1:
        raise InputError(f"lam must be at most 1, got {lam}")
    n = system.n
    small = filter_by_size(system, upper=delta0 * Fraction(n))
    candidate = make_container(small, container.covers, 1 - lam)
    report = verify_container(small, candidate)
    if not report.passed:
        raise PreconditionFailure(
            f"input is not a {1 - lam}-container for the small ranges: "
            f"counterexample {report.counterexample}",
            report,
        )
    full = system.full_mask
    pieces = [full ^ c for c in candidate.covers]
    comp = complement_family(small)
    fam = make_mnet(comp, pieces, lam - delta0, 1 - delta0)
    return _checked_mnet(fam, "container_to_mnet")


# ---------------------------------------------------------------------------
# Containers for small ranges (removal recursion)
# ---------------------------------------------------------------------------


def small_set_container(system, eps, rho, provider, run_log=None):
    """rho-slack containers for a family of ranges of size <= eps*n.

    At each node (Z, S) the provider builds a heavy Mnet of the complements
    within Z at the node's own threshold; removing a piece shrinks Z by a
    constant factor, and a range is covered by the first node where its
    residual |Z \\ R| drops to rho*n.  Node universes are the covers.  The
    recursion depth is capped at ceil(1 + log(1/eps)/log(1/(1-Lambda/2)))
    (its sound generalization when rho < eps) and exceeding the cap is an
    internal error.
    """
    eps = Fraction(eps)
    rho = Fraction(rho)
    if not 0 < rho <= eps < 1:
        raise InputError(f"need 0 < rho <= eps < 1, got rho={rho}, eps={eps}")
    n = system.n
    size_cap = floor_frac(eps * n)
    for mask in system.ranges:
        if mask.bit_count() > size_cap:
            raise InputError("a base range exceeds eps*n; small-set containers do not apply")
    Lam = provider.heaviness
    shrink = 1 - Lam * rho / (eps + rho)
    depth_cap = math.ceil(1 + math.log(1 / eps) / math.log(1 / float(1 - Lam / 2)))
    if rho < eps:
        depth_cap = max(depth_cap, math.ceil(1 + math.log(1 / rho) / math.log(1 / float(shrink))))
    residual_over = floor_frac(rho * n)  # residual must be strictly above rho*n
    full = system.full_mask
    covers = []
    witness = {}
    max_depth = 1
    # Node = (universe mask, surviving range indices, depth).
    stack = [(full, list(range(len(system.ranges))), 1)]
    while stack:
        universe, live, depth = stack.pop()
        max_depth = max(max_depth, depth)
        cover_idx = len(covers)
        covers.append(universe)
        survivors = []
        for j in live:
            mask = system.ranges[j]
            if (mask & universe) != mask:
                continue
            if (universe & ~mask).bit_count() <= residual_over:
                if j not in witness:
                    witness[j] = cover_idx
            else:
                survivors.append(j)
        if not survivors:
            continue
        if depth + 1 > depth_cap:
            raise InternalInvariantError(
                f"small-set container recursion exceeded its depth cap {depth_cap}"
            )
        u_bits = bitsets.indices_from_mask(universe)
        u_size = len(u_bits)
        pos = {orig: k for k, orig in enumerate(u_bits)}
        eps_node = max(
            Fraction(system.ranges[j].bit_count(), u_size) for j in survivors
        )
        local_comps = set()
        for j in survivors:
            comp = universe & ~system.ranges[j]
            local = 0
            for orig in bitsets.indices_from_mask(comp):
                local |= 1 << pos[orig]
            local_comps.add(local)
        node_sys = SetSystem.from_masks(u_size, local_comps)
        fam = provider.mnet(node_sys, 1 - eps_node)
        children = []
        for piece_local in fam.pieces:
            if piece_local == 0:
                continue
            piece = 0
            for k in bitsets.indices_from_mask(piece_local):
                piece |= 1 << u_bits[k]
            child_universe = universe & ~piece
            child_live = [
                j
                for j in survivors
                if (system.ranges[j] & child_universe) == system.ranges[j]
            ]
            if child_live:
                children.append((child_universe, child_live, depth + 1))
        for child in reversed(children):
            stack.append(child)
    if run_log is not None:
        run_log.append(
            {"op": "small-set-container", "eps": eps, "rho": rho, "depth_cap": depth_cap, "max_depth": max_depth}
        )
    fam = make_container(system, covers, eps + rho, witness=witness)
    return _checked_container(fam, "small_set_container")


# ---------------------------------------------------------------------------
# Bootstrapping a size band
# ---------------------------------------------------------------------------


def bootstrap_interval_mnet(system, eps, delta, provider, run_log=None):
    """(1-4*eps)-heavy delta-Mnet for the ranges of size in [delta*n, (1+eps)*delta*n].

    A maximal packing at separation eps*delta*n groups the band; within each
    member P the complements of the projected group ranges are small (at most
    eps' = 3*eps/(2+2*eps) of |P|), so small_set_container covers them and the
    complements of the covers inside P are the pieces.
    """
    eps = Fraction(eps)
    delta = Fraction(delta)
    if not 0 < eps <= HALF:
        raise InputError(f"eps must be in (0,1/2], got {eps}")
    if not eps < delta <= 1:
        raise InputError(f"delta must be in (eps,1], got {delta}")
    n = system.n
    lo_int = ceil_frac(delta * n)
    hi_int = min(n, floor_frac((1 + eps) * delta * n))
    band_masks = [m for m in system.ranges if lo_int <= m.bit_count() <= hi_int]
    band = SetSystem(n, tuple(band_masks))
    lam_out = max(Fraction(0), 1 - 4 * eps)
    if not band_masks:
        return _checked_mnet(make_mnet(band, [], lam_out, delta, witness={}), "bootstrap")
    sep = floor_frac(eps * delta * n)
    packing = greedy_delta_packing(band, sep)
    eps_prime = 3 * eps / (2 + 2 * eps)
    if run_log is not None:
        run_log.append(
            {"op": "bootstrap", "eps": eps, "delta": delta, "eps_prime": eps_prime,
             "band": (lo_int, hi_int), "packing_size": len(packing.members)}
        )
    packed_band = bitsets.pack_masks(band.ranges, n)
    pieces = []
    witness = {}
    for member in packing.members:
        member_row = bitsets.pack_masks([member], n)[0]
        dists = bitsets.symdiff_counts(member_row, packed_band)
        group = [j for j in range(len(band.ranges)) if dists[j] <= sep and j not in witness]
        if not group:
            continue
        p_bits = bitsets.indices_from_mask(member)
        p_size = len(p_bits)
        pos = {orig: k for k, orig in enumerate(p_bits)}
        local_full = (1 << p_size) - 1
        comp_cap = floor_frac(eps_prime * p_size)
        local_comp = {}
        for j in group:
            inter = band.ranges[j] & member
            local = 0
            for orig in bitsets.indices_from_mask(inter):
                local |= 1 << pos[orig]
            comp = local_full ^ local
            if comp.bit_count() > comp_cap:
                raise InternalInvariantError(
                    "projected complement exceeds the eps' bound inside a packing member"
                )
            local_comp[j] = comp
        comp_sys = SetSystem.from_masks(p_size, set(local_comp.values()))
        comp_index = {m: k for k, m in enumerate(comp_sys.ranges)}
        cont = small_set_container(comp_sys, eps_prime, eps, provider, run_log=run_log)
        for j, comp in local_comp.items():
            cover = _container_witness_cover(cont, comp_index[comp], comp)
            piece_local = local_full ^ cover
            piece = 0
            for k in bitsets.indices_from_mask(piece_local):
                piece |= 1 << p_bits[k]
            pieces.append(piece)
            witness[j] = piece
    ordered = list(dict.fromkeys(pieces))
    position = {p: i for i, p in enumerate(ordered)}
    witness_idx = {j: position[p] for j, p in witness.items()}
    fam = make_mnet(band, ordered, lam_out, delta, witness=witness_idx)
    return _checked_mnet(fam, "bootstrap_interval_mnet")


def _container_witness_cover(family, range_idx, range_mask):
    slack_cap = floor_frac(family.eps * family.base.n)
    hint = (family.witness or {}).get(range_idx)
    if hint is not None:
        cover = family.covers[hint]
        if (range_mask & cover) == range_mask and (cover & ~range_mask).bit_count() <= slack_cap:
            return cover
    for cover in family.covers:
        if (range_mask & cover) == range_mask and (cover & ~range_mask).bit_count() <= slack_cap:
            return cover
    raise InternalInvariantError("verified container has no cover for a range")


# ---------------------------------------------------------------------------
# Arbitrarily heavy Mnets, containers, brackets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeavyMnetParams:
    """Derived parameters of the heaviness construction.

    eps0 = (1-lam)/4 exactly; t0 is the ceiled recursion budget
    1 + log(4/(1-lam))/log(1/(1-Lambda/2)); delta_seq/l_seq are the geometric
    band bottoms/tops delta_k = (1+eps0)^k * eta until the ladder reaches 1.
    band_ratio is the step actually used for the bands (eps0, dropping to
    eta/2 when eta <= eps0 so every band keeps its separation below its
    delta) and band_deltas the corresponding ladder.
    """

    lam: Fraction
    eta: Fraction
    heaviness: Fraction
    eps0: Fraction
    t0_raw: float
    t0: int
    delta_seq: tuple
    l_seq: tuple
    band_ratio: Fraction
    band_deltas: tuple

    @staticmethod
    def from_targets(lam, eta, heaviness):
        lam = Fraction(lam)
        eta = Fraction(eta)
        heaviness = Fraction(heaviness)
        if not 0 < lam < 1 or not 0 < eta < 1:
            raise InputError("lam and eta must lie in (0,1)")
        eps0 = (1 - lam) / 4
        t0_raw = 1 + math.log(4 / float(1 - lam)) / math.log(1 / (1 - float(heaviness) / 2))
        ratio = eps0 if eta > eps0 else eta / 2

        def ladder(step):
            out = []
            d = eta
            while d < 1:
                out.append(d)
                d = (1 + step) * d
            return tuple(out)

        deltas = ladder(eps0)
        tops = tuple((1 + eps0) * d for d in deltas)
        return HeavyMnetParams(
            lam, eta, heaviness, eps0, t0_raw, math.ceil(t0_raw),
            deltas, tops, ratio, ladder(ratio),
        )


def heavy_mnet(system, lam, eta, provider, run_log=None):
    """lam-heavy eta-Mnet for any lam in (0,1): bootstrap each band of the
    geometric size ladder delta_k = (1+ratio)^k * eta and take the union."""
    params = HeavyMnetParams.from_targets(lam, eta, provider.heaviness)
    if run_log is not None:
        run_log.append({"op": "heavy-mnet", "params": params})
    index_of = {m: i for i, m in enumerate(system.ranges)}
    pieces = []
    witness = {}
    for delta_k in params.band_deltas:
        band_fam = bootstrap_interval_mnet(system, params.band_ratio, delta_k, provider, run_log=run_log)
        band_witness = band_fam.witness or {}
        for j, mask in enumerate(band_fam.base.ranges):
            base_idx = index_of[mask]
            if base_idx in witness:
                continue
            if j in band_witness:
                piece = band_fam.pieces[band_witness[j]]
                witness[base_idx] = piece
                pieces.append(piece)
    ordered = list(dict.fromkeys(pieces))
    position = {p: i for i, p in enumerate(ordered)}
    witness_idx = {j: position[p] for j, p in witness.items()}
    fam = make_mnet(system, ordered, Fraction(lam), Fraction(eta), witness=witness_idx)
    return _checked_mnet(fam, "heavy_mnet")


def build_container(system, eps, provider_complement, run_log=None):
    """eps-container: {X} for the big ranges, small-set containers for ranges
    up to (eps/2)*n, and complements of a (1-eps)-heavy eps-Mnet of the
    complement family for everything of size at most (1-eps)*n."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise InputError(f"eps must be in (0,1), got {eps}")
    n = system.n
    full = system.full_mask
    covers = [full]
    witness_masks = {}
    big_at = ceil_frac((1 - eps) * n)
    small_sys = filter_by_size(system, upper=eps / 2 * Fraction(n))
    if small_sys.ranges:
        c1 = small_set_container(small_sys, eps / 2, eps / 2, provider_complement, run_log=run_log)
        covers.extend(c1.covers)
    comp = complement_family(system)
    comp_index = {m: i for i, m in enumerate(comp.ranges)}
    mfam = heavy_mnet(comp, 1 - eps, eps, provider_complement, run_log=run_log)
    mnet_witness = mfam.witness or {}
    for idx, mask in enumerate(system.ranges):
        if mask.bit_count() >= big_at:
            witness_masks[idx] = full
            continue
        comp_idx = comp_index[full ^ mask]
        piece = mfam.pieces[mnet_witness[comp_idx]]
        cover = full ^ piece
        covers.append(cover)
        witness_masks[idx] = cover
    ordered = list(dict.fromkeys(covers))
    position = {c: i for i, c in enumerate(ordered)}
    witness = {idx: position[c] for idx, c in witness_masks.items()}
    fam = make_container(system, ordered, eps, witness=witness)
    return _checked_container(fam, "build_container")


def build_bracket(system, eps, provider, provider_complement, run_log=None):
    """eps-uniform bracket: upper sets from an (eps/2)-container, lower sets
    from a (1-eps/2)-heavy (eps/2)-Mnet of the system itself (empty set for
    ranges of size at most (eps/2)*n)."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise InputError(f"eps must be in (0,1), got {eps}")
    n = system.n
    cont = build_container(system, eps / 2, provider_complement, run_log=run_log)
    mfam = heavy_mnet(system, 1 - eps / 2, eps / 2, provider, run_log=run_log)
    small_at = floor_frac(eps / 2 * Fraction(n))
    sets = [0]
    pairing_masks = {}
    cont_witness = cont.witness or {}
    mnet_witness = mfam.witness or {}
    for idx, mask in enumerate(system.ranges):
        upper = cont.covers[cont_witness[idx]]
        if mask.bit_count() <= small_at:
            lower = 0
        else:
            lower = mfam.pieces[mnet_witness[idx]]
        sets.append(upper)
        sets.append(lower)
        pairing_masks[idx] = (lower, upper)
    ordered = list(dict.fromkeys(sets))
    position = {s: i for i, s in enumerate(ordered)}
    pairing = {idx: (position[lo], position[hi]) for idx, (lo, hi) in pairing_masks.items()}
    fam = make_bracket(system, ordered, eps, pairing=pairing)
    report = verify_bracket(system, fam)
    if not report.passed:
        raise InternalInvariantError(f"build_bracket failed self-verification: {report.counterexample}")
    return fam
