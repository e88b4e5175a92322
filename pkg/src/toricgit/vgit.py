"""Variation of GIT for the class-group torus acting on Cox coordinates.

A character is an integer vector in the free part of the class group.
The unstable locus of a character is the union of coordinate subspaces
indexed by supports S with the character outside cone(degrees over S);
that family is downward-closed, so it is stored by its maximal elements
(the signature).  Chambers are the regions of the effective cone where
the signature is constant, enumerated through the hyperplane
arrangement spanned by the degree vectors.

Everything here works with the free part only; torsion residues ride
along in the DegreeMap but never influence cone geometry.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import lcm

from .cones import cone_from_generators, full_space
from .cox import irrelevant_ideal, stanley_reisner
from .linalg import IntMatrix, kernel_basis, matrix_rank, sign_normalized
from .lp import in_cone, max_strict_slack

MAX_CHAMBER_RANK = 4
MAX_CHAMBER_RAYS = 16
MAX_DEGREE_CLASSES = 16


class BoundaryCharacterError(ValueError):
    """Character sits on a GIT wall, so its chamber is ambiguous."""


@dataclass(frozen=True)
class ChamberSignature:
    """Maximal unstable supports of a character, canonically sorted.

    outside_effective marks characters with no semistable points at
    all; their single facet is the full index set.
    """

    facets: tuple
    outside_effective: bool = False

    def __post_init__(self):
        object.__setattr__(
            self,
            "facets",
            tuple(sorted(tuple(sorted(f)) for f in self.facets)),
        )

    def max_facet_size(self):
        return max((len(f) for f in self.facets), default=0)


def _check_character(dm, chi):
    chi = tuple(int(x) for x in chi)
    if len(chi) != dm.cl_free_rank:
        raise ValueError(
            f"character has {len(chi)} coordinates, class group free rank "
            f"is {dm.cl_free_rank}"
        )
    return chi


@lru_cache(maxsize=None)
def _degree_classes(dm):
    """Rays grouped by their free degree vector, deterministic order."""
    groups = {}
    for i, d in enumerate(dm.degrees_free):
        groups.setdefault(d, []).append(i)
    return tuple((vec, tuple(idx)) for vec, idx in sorted(groups.items()))


def _class_membership(dm, chi):
    """For every subset of degree classes: does its cone contain chi?

    Masks are bit sets over the class list.  Membership is monotone
    (larger mask, larger cone), so known-unstable supersets settle
    smaller masks without an LP call.
    """
    classes = _degree_classes(dm)
    k = len(classes)
    if k > MAX_DEGREE_CLASSES:
        raise ValueError(
            f"too many distinct degree vectors ({k} > {MAX_DEGREE_CLASSES})"
        )
    vectors = [vec for vec, _ in classes]
    member = {}
    for mask in sorted(range(2**k), key=lambda m: -bin(m).count("1")):
        unstable_superset = any(
            not member[mask | (1 << c)]
            for c in range(k)
            if not (mask >> c) & 1
        )
        if unstable_superset:
            member[mask] = False
            continue
        gens = [vectors[c] for c in range(k) if (mask >> c) & 1]
        member[mask] = in_cone(gens, chi)
    return classes, member


def _mask_support(classes, mask):
    idx = []
    for c, (_, members) in enumerate(classes):
        if (mask >> c) & 1:
            idx.extend(members)
    return tuple(sorted(idx))


@lru_cache(maxsize=None)
def unstable_supports(dm, chi) -> ChamberSignature:
    """Maximal supports S with chi outside cone(deg over S).

    Membership depends only on which degree classes S touches, so the
    search runs over class masks.  A character outside the effective
    cone has every support unstable; that comes back flagged with the
    full set as its single facet.
    """
    chi = _check_character(dm, chi)
    classes, member = _class_membership(dm, chi)
    k = len(classes)
    full = (1 << k) - 1
    if not member[full]:
        return ChamberSignature(
            facets=(tuple(range(dm.n_rays)),), outside_effective=True
        )
    maximal = [
        mask
        for mask in range(2**k)
        if not member[mask]
        and all(
            member[mask | (1 << c)] for c in range(k) if not (mask >> c) & 1
        )
    ]
    facets = tuple(_mask_support(classes, m) for m in maximal)
    return ChamberSignature(facets=facets)


def chamber_signature(dm, chi) -> ChamberSignature:
    """Alias for unstable_supports: the signature names the chamber."""
    return unstable_supports(dm, chi)


def unstable_codim(dm, chi) -> int:
    """Codimension of the unstable locus in Cox coordinate space."""
    sig = unstable_supports(dm, chi)
    return dm.n_rays - sig.max_facet_size()


@lru_cache(maxsize=None)
def effective_cone(dm):
    return cone_from_generators(dm.cl_free_rank, dm.degrees_free)


@lru_cache(maxsize=None)
def moving_cone(dm):
    """Intersection over each variable of the cone omitting its degree.

    Dropping one ray of a degree class with multiplicity two or more
    leaves the generating set unchanged, so only singleton classes cut
    the intersection down.
    """
    acc = effective_cone(dm)
    classes = _degree_classes(dm)
    for c, (_, members) in enumerate(classes):
        if len(members) > 1:
            continue
        gens = [
            vec for cc, (vec, _) in enumerate(classes) if cc != c
        ]
        acc = acc.intersect(cone_from_generators(dm.cl_free_rank, gens))
    return acc


@lru_cache(maxsize=None)
def nef_cone(fan, dm):
    """Intersection over maximal cones of cone(degrees off the cone).

    Full-dimensional exactly for projective fans; anything thinner is
    reported as an error because no ample character exists.
    """
    acc = full_space(dm.cl_free_rank)
    for c in fan.max_cones:
        off = [dm.degrees_free[i] for i in range(fan.n_rays) if i not in c]
        acc = acc.intersect(cone_from_generators(dm.cl_free_rank, off))
    if acc.dim_of() < dm.cl_free_rank:
        raise ValueError("nef cone has empty interior; the fan is not projective")
    return acc


def ample_character(fan, dm):
    """Deterministic interior point of the nef cone: sum of its rays."""
    nef = nef_cone(fan, dm)
    gens = nef.generators
    return tuple(sum(g[i] for g in gens) for i in range(dm.cl_free_rank))


def is_boundary_character(dm, chi) -> bool:
    """True when the signature is not locally constant at chi.

    That happens exactly when some support cone contains chi without
    chi being in its topological interior: full-dimensional cones
    contribute their boundaries, lower-dimensional cones contribute all
    of themselves.
    """
    chi = _check_character(dm, chi)
    classes, member = _class_membership(dm, chi)
    k = len(classes)
    rank = dm.cl_free_rank
    vectors = [vec for vec, _ in classes]
    for mask in range(2**k):
        if not member[mask]:
            continue
        gens = [vectors[c] for c in range(k) if (mask >> c) & 1]
        cone = cone_from_generators(rank, gens)
        if cone.dim_of() < rank or not cone.strictly_contains(chi):
            return True
    return False


def same_chamber(dm, chi1, chi2) -> bool:
    """Equality of signatures for two interior characters.

    Boundary characters are refused: their signature is well defined
    but does not name an open chamber.
    """
    for chi in (chi1, chi2):
        chi = _check_character(dm, chi)
        sig = unstable_supports(dm, chi)
        if sig.outside_effective:
            raise ValueError(f"character {chi} is outside the effective cone")
        if is_boundary_character(dm, chi):
            raise BoundaryCharacterError(f"character {chi} lies on a wall")
    return unstable_supports(dm, chi1) == unstable_supports(dm, chi2)


def _arrangement_normals(dm):
    """Hyperplanes spanned by rank-1-deficient subsets of the degrees.

    Every wall of every support cone lies on one of these; extra
    non-wall hyperplanes only split chambers into pieces that merging
    by signature reassembles.
    """
    rank = dm.cl_free_rank
    vectors = [vec for vec, _ in _degree_classes(dm)]
    normals = set()
    for sub in combinations(vectors, rank - 1):
        if matrix_rank(sub) != rank - 1:
            continue
        ker = kernel_basis(IntMatrix.from_rows(sub))
        if ker.cols != 1:
            continue
        normals.add(sign_normalized(ker.column(0)))
    return sorted(normals)


def _integer_witness(x):
    den = lcm(*[f.denominator for f in x]) if x else 1
    return tuple(int(f * den) for f in x)


def enumerate_chambers(dm):
    """One (interior character, signature) pair per chamber.

    Cells of the wall arrangement are enumerated by sign-vector search
    with exact LP pruning, then cells sharing a signature are merged
    (chambers are convex, so any constituent cell's witness serves).
    Output is sorted by signature for determinism.
    """
    if dm.cl_free_rank > MAX_CHAMBER_RANK:
        raise ValueError(f"chamber enumeration capped at rank {MAX_CHAMBER_RANK}")
    if dm.n_rays > MAX_CHAMBER_RAYS:
        raise ValueError(f"chamber enumeration capped at {MAX_CHAMBER_RAYS} rays")
    chambers = {}
    for _signs, chi in _enumerate_cells(dm):
        sig = unstable_supports(dm, chi)
        chambers.setdefault(sig, chi)
    return [
        (chi, sig)
        for sig, chi in sorted(chambers.items(), key=lambda kv: kv[0].facets)
    ]


@lru_cache(maxsize=None)
def _crossing_normals(dm):
    """Arrangement normals whose hyperplane meets the interior of
    the effective cone.  Only these can separate chambers; the rest
    keep a constant sign over the whole cone and never branch."""
    eff_rows = effective_cone(dm).facet_normals
    crossing = []
    for n in _arrangement_normals(dm):
        t, _ = max_strict_slack(eff_rows, eq_rows=[n])
        if t > 0:
            crossing.append(n)
    return tuple(crossing)


@lru_cache(maxsize=None)
def _enumerate_cells(dm):
    """All strictly feasible sign vectors over the wall arrangement.

    Each cell is an open region: effective-cone facet normals strict,
    plus a strict sign per crossing hyperplane.  Returns (sign vector,
    integer interior witness) pairs in DFS order.  The DFS carries an
    interior witness down each branch so that the child on the
    witness's own side needs no LP at all.
    """
    eff_rows = list(effective_cone(dm).facet_normals)
    normals = _crossing_normals(dm)
    t, x0 = max_strict_slack(eff_rows)
    assert t > 0, "effective cone must be full-dimensional"
    if not normals:
        return (((), _integer_witness(x0)),)
    cells = []

    def rec(signs, rows, witness):
        if len(signs) == len(normals):
            cells.append((tuple(signs), _integer_witness(witness)))
            return
        n = normals[len(signs)]
        d = sum(a * b for a, b in zip(n, witness))
        first = 1 if d >= 0 else -1
        for s in (first, -first):
            row = tuple(s * v for v in n)
            if s == first and d != 0:
                rec(signs + [s], rows + [row], witness)
                continue
            t, x = max_strict_slack(rows + [row])
            if t > 0:
                rec(signs + [s], rows + [row], x)

    rec([], eff_rows, x0)
    return tuple(sorted(cells))


def chambers_cover_effective(dm) -> bool:
    """Certify the enumerated cells tile the effective cone.

    For every cell and every arrangement hyperplane, if the cell has a
    facet on that hyperplane interior to the effective cone (an LP with
    one equality), the sign-flipped neighbor must also have been
    enumerated.  Any missing neighbor would be an uncovered open
    region.
    """
    eff_rows = list(effective_cone(dm).facet_normals)
    normals = _crossing_normals(dm)
    cells = _enumerate_cells(dm)
    patterns = {signs for signs, _ in cells}
    for signs, _chi in cells:
        for i, n in enumerate(normals):
            rows = eff_rows + [
                tuple(s * v for v in m)
                for j, (s, m) in enumerate(zip(signs, normals))
                if j != i
            ]
            t, _ = max_strict_slack(rows, eq_rows=[n])
            if t > 0:
                neighbor = signs[:i] + (-signs[i],) + signs[i + 1 :]
                if neighbor not in patterns:
                    return False
    return True


def chamber_closure(dm, chi):
    """Closure of chi's chamber: intersection of its semistable cones."""
    chi = _check_character(dm, chi)
    classes, member = _class_membership(dm, chi)
    k = len(classes)
    vectors = [vec for vec, _ in classes]
    acc = full_space(dm.cl_free_rank)
    for mask in range(2**k):
        if not member[mask]:
            continue
        gens = [vectors[c] for c in range(k) if (mask >> c) & 1]
        acc = acc.intersect(cone_from_generators(dm.cl_free_rank, gens))
    return acc


def stable_base_locus_codim(fan, dm, chi):
    """Codimension in X of the stable base locus of the class chi.

    None means the base locus is empty.  Otherwise the answer is
    n_rays minus the largest support that is chi-unstable yet
    semistable for an ample character: those supports survive the
    ample GIT quotient and descend to X with the same codimension.
    """
    chi = _check_character(dm, chi)
    classes, member = _class_membership(dm, chi)
    k = len(classes)
    full = (1 << k) - 1
    if not member[full]:
        raise ValueError(f"character {chi} is outside the effective cone")
    ample = ample_character(fan, dm)
    _, ample_member = _class_membership(dm, ample)
    best = None
    for mask in range(2**k):
        if member[mask] or not ample_member[mask]:
            continue
        size = len(_mask_support(classes, mask))
        best = size if best is None else max(best, size)
    if best is None:
        return None
    return dm.n_rays - best


def unstable_inclusion_forces_nef(fan, dm) -> bool:
    """Unstable-locus inclusion pins the nef chamber.

    For every chamber representative: containing the ample unstable
    locus is only allowed for the nef chamber itself.  This is the
    one-chamber-at-a-time content of the descent argument for
    restriction maps; a single counterexample falsifies it.
    """
    ample = ample_character(fan, dm)
    nef_sig = unstable_supports(dm, ample)
    for chi, sig in enumerate_chambers(dm):
        contains_ample_unstable = all(
            any(set(af) <= set(f) for f in sig.facets) for af in nef_sig.facets
        )
        if contains_ample_unstable and sig != nef_sig:
            return False
    return True


def ample_signature_matches_irrelevant_ideal(fan, dm) -> bool:
    """Cox consistency: ample unstable facets are the SR facets.

    The semistable locus of an ample character must be the complement
    of the irrelevant ideal's zero set, so the maximal unstable
    supports coincide with the Stanley-Reisner facets.
    """
    ample = ample_character(fan, dm)
    sig = unstable_supports(dm, ample)
    sr = stanley_reisner(irrelevant_ideal(fan))
    return sig.facets == sr.facets and not sig.outside_effective
