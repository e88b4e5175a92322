"""Rational polyhedral cones with exact dual descriptions.

A cone is stored canonically as (saturated lineality basis, extremal rays
reduced modulo the lineality space).  Duality is computed by an
incremental halfspace intersection: each inequality either eats one
lineality direction or splits the current ray set Fourier-Motzkin style,
with LP-based redundancy pruning keeping the intermediate sets small.
Both descriptions of a cone are therefore available exactly, and
containment, intersection and equality reduce to integer dot products.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .linalg import matrix_rank, primitive, saturated_row_basis
from .lp import nonneg_combination, rational_solve


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _combine(u, cu, v, cv):
    """Integer combination cu*u + cv*v, made primitive."""
    return primitive(tuple(cu * x + cv * y for x, y in zip(u, v)))


def _member_with_lineality(rays, lin, v):
    gens = list(rays) + [l for l in lin] + [tuple(-x for x in l) for l in lin]
    return nonneg_combination(gens, v) is not None


def _prune_rays(rays, lin):
    """Drop rays expressible from the others (and the lineality)."""
    kept = sorted(set(rays))
    i = 0
    while i < len(kept):
        r = kept[i]
        rest = kept[:i] + kept[i + 1 :]
        if _member_with_lineality(rest, lin, r):
            kept.pop(i)
        else:
            i += 1
    return kept


def _reduce_mod_lineality(r, lin):
    """Orthogonal projection of r off span(lin), cleared to a primitive
    integer vector; None if r lies in the span."""
    if not lin:
        return primitive(r) if any(r) else None
    gram = [[_dot(a, b) for b in lin] for a in lin]
    rhs = [_dot(a, r) for a in lin]
    coeffs = rational_solve(gram, rhs)
    proj = [
        Fraction(x) - sum(c * Fraction(l[i]) for c, l in zip(coeffs, lin))
        for i, x in enumerate(r)
    ]
    if all(p == 0 for p in proj):
        return None
    den = lcm(*[p.denominator for p in proj])
    return primitive(tuple(int(p * den) for p in proj))


def duals_from_inequalities(dim, normals, prune_threshold=24):
    """Generators (lineality basis, extremal rays) of the solution cone
    {x : <a, x> >= 0 for every a in normals}.

    Starts from all of Q^dim and adds one halfspace at a time.  While a
    lineality direction pairs nontrivially with the new normal, that
    direction is consumed: it becomes a ray and everything else is
    sheared into the hyperplane.  Otherwise the standard positive/zero/
    negative ray split applies.
    """
    lin = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    rays = []
    todo = sorted(set(primitive(n) for n in normals if any(n)))
    for a in todo:
        l0 = next((l for l in lin if _dot(a, l) != 0), None)
        if l0 is not None:
            d0 = _dot(a, l0)
            if d0 < 0:
                l0 = tuple(-x for x in l0)
                d0 = -d0
            neg_l0 = tuple(-x for x in l0)
            lin = [
                _combine(l, d0, l0, -_dot(a, l))
                for l in lin
                if l != l0 and l != neg_l0
            ]
            rays = [_combine(r, d0, l0, -_dot(a, r)) for r in rays]
            rays.append(l0)
            rays = sorted(set(rays))
            continue
        pos = [r for r in rays if _dot(a, r) > 0]
        zero = [r for r in rays if _dot(a, r) == 0]
        neg = [r for r in rays if _dot(a, r) < 0]
        if not neg:
            continue
        new = pos + zero
        for p in pos:
            dp = _dot(a, p)
            for n in neg:
                dn = _dot(a, n)
                new.append(_combine(p, -dn, n, dp))
        rays = sorted(set(new))
        if len(rays) > prune_threshold:
            rays = _prune_rays(rays, lin)
    rays = _prune_rays(rays, lin)
    lin_basis = saturated_row_basis(lin, dim)
    reduced = sorted(
        set(
            p
            for p in (_reduce_mod_lineality(r, lin_basis) for r in rays)
            if p is not None
        )
    )
    return lin_basis, tuple(reduced)


class RationalCone:
    """Canonical rational cone: lineality rows plus extremal rays."""

    __slots__ = ("dim", "rays", "lin", "_dual")

    def __init__(self, dim, rays, lin, _raw=True):
        self.dim = dim
        self._dual = None
        if _raw:
            lin_basis = saturated_row_basis(lin, dim)
            reduced = sorted(
                set(
                    p
                    for p in (_reduce_mod_lineality(r, lin_basis) for r in rays)
                    if p is not None
                )
            )
            reduced = _prune_rays(reduced, lin_basis)
            self.rays = tuple(reduced)
            self.lin = lin_basis
        else:
            self.rays = tuple(rays)
            self.lin = tuple(lin)

    @property
    def generators(self):
        """Full generating list: rays plus both signs of the lineality basis."""
        out = list(self.rays)
        for l in self.lin:
            out.append(l)
            out.append(tuple(-x for x in l))
        return tuple(out)

    @property
    def lineality_dim(self):
        return len(self.lin)

    def dual(self):
        if self._dual is None:
            lin, rays = duals_from_inequalities(self.dim, self.generators)
            d = RationalCone(self.dim, rays, lin, _raw=False)
            d._dual = self
            self._dual = d
        return self._dual

    @property
    def facet_normals(self):
        return self.dual().generators

    def contains(self, v):
        d = self.dual()
        return all(_dot(n, v) >= 0 for n in d.rays) and all(
            _dot(l, v) == 0 for l in d.lin
        )

    def strictly_contains(self, v):
        """Membership in the relative interior."""
        d = self.dual()
        return all(_dot(n, v) > 0 for n in d.rays) and all(
            _dot(l, v) == 0 for l in d.lin
        )

    def is_strictly_convex(self):
        return not self.lin

    def is_zero(self):
        return not self.rays and not self.lin

    def dim_of(self):
        return matrix_rank(list(self.rays) + list(self.lin))

    def relative_interior_point(self):
        """Sum of the extremal rays; strictly positive on every
        non-lineality facet."""
        if self.is_zero():
            raise ValueError("the zero cone has no relative interior point")
        if not self.rays:
            return tuple(0 for _ in range(self.dim))
        return tuple(sum(r[i] for r in self.rays) for i in range(self.dim))

    def intersect(self, other):
        if self.dim != other.dim:
            raise ValueError("ambient dimension mismatch")
        normals = tuple(self.facet_normals) + tuple(other.facet_normals)
        lin, rays = duals_from_inequalities(self.dim, normals)
        return RationalCone(self.dim, rays, lin, _raw=False)

    def __repr__(self):
        return f"RationalCone(dim={self.dim}, rays={list(self.rays)}, lin={list(self.lin)})"


def cone_from_generators(dim, gens):
    gens = [tuple(int(x) for x in g) for g in gens]
    if any(len(g) != dim for g in gens):
        raise ValueError("generator of wrong dimension")
    lin, rays = duals_from_inequalities(dim, gens)  # this is the dual cone
    dual = RationalCone(dim, rays, lin, _raw=False)
    lin2, rays2 = duals_from_inequalities(dim, dual.generators)
    cone = RationalCone(dim, rays2, lin2, _raw=False)
    cone._dual = dual
    dual._dual = cone
    return cone


def cone_from_inequalities(dim, normals):
    normals = [tuple(int(x) for x in n) for n in normals]
    if any(len(n) != dim for n in normals):
        raise ValueError("normal of wrong dimension")
    lin, rays = duals_from_inequalities(dim, normals)
    return RationalCone(dim, rays, lin, _raw=False)


def full_space(dim):
    return cone_from_inequalities(dim, [])


def zero_cone(dim):
    return cone_from_generators(dim, [])


def cones_equal(c1, c2):
    """Equality as point sets, via mutual containment of generators."""
    if c1.dim != c2.dim:
        return False
    return all(c2.contains(g) for g in c1.generators) and all(
        c1.contains(g) for g in c2.generators
    )
