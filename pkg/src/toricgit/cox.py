"""Cox presentation data: grading, irrelevant ideal, zero-locus geometry.

The degree map realizes the class group as the cokernel of the ray
matrix, one degree per coordinate variable.  The irrelevant ideal and
its Stanley-Reisner complex are kept purely combinatorial: squarefree
ideals are lists of generator supports, complexes are lists of facets,
and the zero locus is only ever touched through codimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fans import validate
from .linalg import IntMatrix, cokernel


@dataclass(frozen=True)
class DegreeMap:
    """Grading of the Cox variables by the class group.

    degrees_free[i] is the image of the i-th variable in the free part
    Z^cl_free_rank; degrees_torsion[i] collects its residues modulo the
    invariant factors in `torsion`.  Coordinates depend on the Smith
    basis, so callers should test relations and cone memberships, not
    raw vectors.
    """

    n_rays: int
    cl_free_rank: int
    torsion: tuple
    degrees_free: tuple
    degrees_torsion: tuple

    def divisor_class(self, coefficients):
        """Class of sum(a_i * D_i) in free coordinates plus residues."""
        if len(coefficients) != self.n_rays:
            raise ValueError("coefficient list does not match the ray count")
        free = tuple(
            sum(a * d[k] for a, d in zip(coefficients, self.degrees_free))
            for k in range(self.cl_free_rank)
        )
        tors = tuple(
            sum(a * d[k] for a, d in zip(coefficients, self.degrees_torsion))
            % self.torsion[k]
            for k in range(len(self.torsion))
        )
        return free, tors


def degree_map(fan) -> DegreeMap:
    """Cokernel grading of the fan's ray matrix.

    Only complete fans are accepted: the rank formula
    cl_free_rank = n_rays - dim needs the rays to span.
    """
    if not validate(fan).complete:
        raise ValueError("degree map needs a complete fan")
    data = cokernel(IntMatrix.from_rows(fan.rays))
    degrees_free = tuple(
        tuple(data.projection.entries[k][i] for k in range(data.free_rank))
        for i in range(fan.n_rays)
    )
    degrees_torsion = tuple(
        tuple(
            data.torsion_projection.entries[k][i] % data.torsion[k]
            for k in range(len(data.torsion))
        )
        for i in range(fan.n_rays)
    )
    return DegreeMap(
        n_rays=fan.n_rays,
        cl_free_rank=data.free_rank,
        torsion=data.torsion,
        degrees_free=degrees_free,
        degrees_torsion=degrees_torsion,
    )


@dataclass(frozen=True)
class SquarefreeIdeal:
    """Squarefree monomial ideal given by its generator supports.

    Supports form an antichain of nonempty index sets.  An ideal with no
    supports stands for the degenerate unit ideal (empty zero locus);
    see the per-operation conventions below.
    """

    n_vars: int
    generator_supports: tuple

    def __post_init__(self):
        supports = tuple(
            sorted(set(tuple(sorted(s)) for s in self.generator_supports))
        )
        for s in supports:
            if not s:
                raise ValueError("empty generator support")
            if s[0] < 0 or s[-1] >= self.n_vars:
                raise ValueError(f"support {s} out of range")
        for a in supports:
            for b in supports:
                if a != b and set(a) <= set(b):
                    raise ValueError("generator supports must be an antichain")
        object.__setattr__(self, "generator_supports", supports)

    def contains_monomial(self, support):
        """Is the squarefree monomial with this support in the ideal?"""
        s = set(support)
        return any(set(g) <= s for g in self.generator_supports)


@dataclass(frozen=True)
class FaceComplex:
    """Simplicial complex on n_verts vertices, stored by its facets."""

    n_verts: int
    facets: tuple

    def __post_init__(self):
        facets = tuple(sorted(set(tuple(sorted(f)) for f in self.facets)))
        for a in facets:
            for b in facets:
                if a != b and set(a) <= set(b):
                    raise ValueError("facets must be an antichain")
        object.__setattr__(self, "facets", facets)

    def is_face(self, subset):
        s = set(subset)
        return any(s <= set(f) for f in self.facets)


def irrelevant_ideal(fan) -> SquarefreeIdeal:
    """Generators x^(complement of sigma) over the maximal cones.

    A maximal cone using every ray would contribute the monomial 1; that
    degenerate case collapses to the no-generator (unit) ideal.
    """
    n = fan.n_rays
    complements = set()
    for c in fan.max_cones:
        comp = tuple(sorted(set(range(n)) - set(c)))
        if not comp:
            return SquarefreeIdeal(n, ())
        complements.add(comp)
    return SquarefreeIdeal(n, tuple(sorted(complements)))


def _minimal_hitting_sets(supports, n_vars):
    """All inclusion-minimal sets meeting every support.

    Branch on the elements of the first unhit support, smallest first;
    prune revisited partial selections, reduce to an antichain at the
    end.  Exact and fast at the scale of fan data (n_vars <= 20).
    """
    if n_vars > 20:
        raise ValueError("hitting-set search is capped at 20 variables")
    supports = sorted(supports, key=len)
    found = set()
    seen = set()

    def rec(chosen):
        if chosen in seen:
            return
        seen.add(chosen)
        for s in supports:
            if not chosen & set(s):
                for v in s:
                    rec(chosen | {v})
                return
        found.add(tuple(sorted(chosen)))

    rec(frozenset())
    minimal = [
        h
        for h in found
        if not any(set(o) < set(h) for o in found)
    ]
    return sorted(minimal)


def stanley_reisner(ideal) -> FaceComplex:
    """Faces are the supports whose monomial avoids the ideal.

    Facets are computed as complements of the minimal hitting sets of
    the generator supports.  The no-generator ideal gets the full
    simplex (single facet = everything).
    """
    n = ideal.n_vars
    hitting = _minimal_hitting_sets(ideal.generator_supports, n)
    facets = [tuple(sorted(set(range(n)) - set(h))) for h in hitting]
    return FaceComplex(n, tuple(facets))


def prime_decomposition(ideal):
    """Components are the coordinate primes over complements of facets.

    Squarefree monomial ideals decompose into the primes generated by
    the variables outside each facet of the Stanley-Reisner complex.
    The no-generator ideal yields no components.
    """
    complex_ = stanley_reisner(ideal)
    n = ideal.n_vars
    comps = [
        tuple(sorted(set(range(n)) - set(f))) for f in complex_.facets
    ]
    return sorted(c for c in comps if c)


def zero_locus_codim(ideal) -> int:
    """Codimension of V(ideal) in affine space.

    Equals the smallest prime-component size (the smallest minimal
    hitting set).  The no-generator ideal has empty zero locus; that is
    reported with the sentinel n_vars + 1 rather than an error.
    """
    if not ideal.generator_supports:
        return ideal.n_vars + 1
    hitting = _minimal_hitting_sets(ideal.generator_supports, ideal.n_vars)
    return min(len(h) for h in hitting)


def check_free_action(fan) -> bool:
    """Torus acts freely on the complement of V(I) iff the fan is smooth.

    Unimodular maximal cones mean trivial finite stabilizers for the
    Cox torus on semistable points.
    """
    return validate(fan).smooth
