"""Simplicial fans: construction, validation, divisors, section counts.

A Fan stores primitive ray vectors and maximal cones as index tuples.
Everything downstream assumes the constructor checks passed, so the
constructor is strict: primitive distinct rays, linearly independent
cone generators, maximal cones forming an antichain, and (unless built
by an internal constructor that guarantees it) the geometric fan axiom
that any two cones meet in a common face.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd, lcm

from .cones import cone_from_generators, cones_equal
from .linalg import IntMatrix, matrix_rank, primitive, smith_normal_form
from .lp import max_strict_slack, rational_solve


class FanError(ValueError):
    """Structurally invalid fan input."""


@dataclass(frozen=True)
class FanReport:
    simplicial: bool
    smooth: bool
    complete: bool
    projective: bool


@dataclass(frozen=True)
class TorusInvariantDivisor:
    """Integer coefficients indexed like the host fan's rays."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(int(c) for c in self.coefficients)
        )

    def scale(self, m):
        return TorusInvariantDivisor(tuple(m * c for c in self.coefficients))

    def plus(self, other):
        return TorusInvariantDivisor(
            tuple(a + b for a, b in zip(self.coefficients, other.coefficients))
        )


class Fan:
    """Immutable simplicial fan in Z^dim."""

    __slots__ = ("dim", "rays", "max_cones")

    def __init__(self, dim, rays, max_cones, _trusted=False):
        dim = int(dim)
        if dim < 1:
            raise FanError("fan dimension must be at least 1")
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        if not rays:
            raise FanError("a fan needs at least one ray")
        for r in rays:
            if len(r) != dim:
                raise FanError(f"ray {r} has wrong dimension")
            if not any(r):
                raise FanError("zero vector is not a ray")
            if primitive(r) != r:
                raise FanError(f"ray {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise FanError("duplicate rays")
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in max_cones)
        if not cones:
            raise FanError("a fan needs at least one maximal cone")
        seen = set()
        for c in cones:
            if not c:
                raise FanError("empty cone listed as maximal")
            if c in seen:
                raise FanError(f"duplicate maximal cone {c}")
            seen.add(c)
            if len(set(c)) != len(c):
                raise FanError(f"repeated ray index in cone {c}")
            if c[0] < 0 or c[-1] >= len(rays):
                raise FanError(f"cone {c} references a missing ray")
            if matrix_rank([rays[i] for i in c]) != len(c):
                raise FanError(f"cone {c} is not simplicial (dependent rays)")
        for a in cones:
            for b in cones:
                if a != b and set(a) <= set(b):
                    raise FanError(f"cone {a} is contained in cone {b}")
        used = set(i for c in cones for i in c)
        if used != set(range(len(rays))):
            raise FanError("every ray must appear in some maximal cone")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", tuple(sorted(cones)))
        if not _trusted:
            _check_fan_axiom(self)

    def __setattr__(self, name, value):
        raise AttributeError("Fan is immutable")

    @property
    def n_rays(self):
        return len(self.rays)

    def cone_rays(self, cone):
        return tuple(self.rays[i] for i in cone)

    def __eq__(self, other):
        return (
            isinstance(other, Fan)
            and self.dim == other.dim
            and self.rays == other.rays
            and self.max_cones == other.max_cones
        )

    def __hash__(self):
        return hash((self.dim, self.rays, self.max_cones))

    def __repr__(self):
        return (
            f"Fan(dim={self.dim}, n_rays={self.n_rays}, "
            f"n_max_cones={len(self.max_cones)})"
        )


@lru_cache(maxsize=8192)
def _subset_cone(fan, idx):
    return cone_from_generators(fan.dim, [fan.rays[i] for i in idx])


def _check_fan_axiom(fan):
    """Geometric fan condition: cones meet in common faces."""
    for a, b in combinations(fan.max_cones, 2):
        common = tuple(sorted(set(a) & set(b)))
        inter = _subset_cone(fan, a).intersect(_subset_cone(fan, b))
        want = _subset_cone(fan, common)
        if not cones_equal(inter, want):
            raise FanError(
                f"cones {a} and {b} overlap beyond their common face {common}"
            )


# ---------------------------------------------------------------------------
# JSON interchange


def fan_from_json(data):
    """Build a Fan from a {dim, rays, max_cones} dict, strictly typed."""

    def as_int(x, what):
        if isinstance(x, bool) or not isinstance(x, int):
            raise FanError(f"{what} must be an integer, got {x!r}")
        return x

    def as_list(x, what):
        if not isinstance(x, list):
            raise FanError(f"{what} must be a list, got {type(x).__name__}")
        return x

    if not isinstance(data, dict):
        raise FanError("fan JSON must be an object")
    missing = {"dim", "rays", "max_cones"} - set(data)
    if missing:
        raise FanError(f"fan JSON missing keys: {sorted(missing)}")
    dim = as_int(data["dim"], "dim")
    rays = [
        [as_int(x, "ray entry") for x in as_list(r, "ray")]
        for r in as_list(data["rays"], "rays")
    ]
    cones = [
        [as_int(i, "cone index") for i in as_list(c, "cone")]
        for c in as_list(data["max_cones"], "max_cones")
    ]
    return Fan(dim, rays, cones)


def fan_to_json(fan):
    return {
        "dim": fan.dim,
        "rays": [list(r) for r in fan.rays],
        "max_cones": [list(c) for c in fan.max_cones],
    }


def divisor_from_json(data, fan):
    if not isinstance(data, dict) or "coefficients" not in data:
        raise FanError("divisor JSON must be an object with 'coefficients'")
    coeffs = data["coefficients"]
    if not isinstance(coeffs, list):
        raise FanError("divisor coefficients must be a list")
    if len(coeffs) != fan.n_rays:
        raise FanError(
            f"divisor has {len(coeffs)} coefficients, fan has {fan.n_rays} rays"
        )
    for c in coeffs:
        if isinstance(c, bool) or not isinstance(c, int):
            raise FanError(f"divisor coefficient must be an integer, got {c!r}")
    return TorusInvariantDivisor(tuple(coeffs))


# ---------------------------------------------------------------------------
# validation


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _simplicial_facet_normals(rays, dim):
    """Inward facet normals of a full-dimensional simplicial cone.

    Normal i vanishes on every generator but the i-th, where it is
    positive, so a vector is interior iff all dots are positive.
    """
    normals = []
    system = [list(r) for r in rays]
    for i in range(dim):
        rhs = [1 if j == i else 0 for j in range(dim)]
        sol = rational_solve(system, rhs)
        den = lcm(*[f.denominator for f in sol])
        normals.append(primitive(tuple(int(f * den) for f in sol)))
    return normals


def _is_complete(fan):
    d = fan.dim
    if matrix_rank(fan.rays) != d:
        return False
    if any(len(c) != d for c in fan.max_cones):
        return False
    ridge_count = {}
    for c in fan.max_cones:
        for drop in range(d):
            ridge = c[:drop] + c[drop + 1 :]
            ridge_count[ridge] = ridge_count.get(ridge, 0) + 1
    if any(v != 2 for v in ridge_count.values()):
        return False
    # Deterministic generic probes: with q larger than any facet-normal
    # entry sum, (s_1, s_2 q, ..., s_d q^{d-1}) lies on no cone boundary,
    # so each probe must land in exactly one maximal cone.
    cone_normals = {}
    bound = 1
    for c in fan.max_cones:
        ns = _simplicial_facet_normals(fan.cone_rays(c), d)
        cone_normals[c] = ns
        for n in ns:
            bound = max(bound, sum(abs(x) for x in n))
    q = bound + 1
    powers = [q**i for i in range(d)]
    for mask in range(2**d):
        w = tuple((1 if (mask >> i) & 1 else -1) * powers[i] for i in range(d))
        hits = sum(
            1
            for c in fan.max_cones
            if all(_dot(n, w) > 0 for n in cone_normals[c])
        )
        if hits != 1:
            return False
    return True


def _walls(fan):
    """One (cone, ridge, opposite ray of the neighbor) triple per wall."""
    by_ridge = {}
    for c in fan.max_cones:
        for drop in range(len(c)):
            ridge = c[:drop] + c[drop + 1 :]
            by_ridge.setdefault(ridge, []).append((c, c[drop]))
    walls = []
    for ridge in sorted(by_ridge):
        sides = by_ridge[ridge]
        if len(sides) == 2:
            (c1, _), (_, r2) = sides
            walls.append((c1, ridge, r2))
    return walls


def _is_projective(fan):
    """Strictly convex support function LP.

    One unknown h per ray; on each maximal cone the linear extension is
    determined by the h values of its generators, and across each wall
    the extension must exceed the h of the opposite ray by a common
    positive slack.  Projective iff the maximal slack is positive.
    """
    d = fan.dim
    rows = []
    for cone, _ridge, opp in _walls(fan):
        system = [[fan.rays[j][i] for j in cone] for i in range(d)]
        coords = rational_solve(system, fan.rays[opp])
        row = [Fraction(0)] * fan.n_rays
        for j, idx in enumerate(cone):
            row[idx] += coords[j]
        row[opp] -= 1
        den = lcm(*[f.denominator for f in row])
        rows.append(tuple(int(f * den) for f in row))
    t, _ = max_strict_slack(rows)
    return t > 0


@lru_cache(maxsize=None)
def validate(fan) -> FanReport:
    """Recompute the four structural flags from scratch.

    Smoothness asks each maximal cone's generators to extend to a basis
    (all Smith invariant factors 1).  Completeness pairs every ridge
    with exactly two maximal cones and then checks deterministic probe
    vectors land in exactly one cone each.  Projectivity is the
    support-function LP, attempted only on complete fans.
    """
    simplicial = all(
        matrix_rank([fan.rays[i] for i in c]) == len(c) for c in fan.max_cones
    )
    smooth = True
    for c in fan.max_cones:
        factors = smith_normal_form(
            IntMatrix.from_rows([fan.rays[i] for i in c])
        ).invariant_factors()
        if any(f != 1 for f in factors):
            smooth = False
            break
    complete = _is_complete(fan)
    projective = _is_projective(fan) if complete else False
    return FanReport(
        simplicial=simplicial,
        smooth=smooth,
        complete=complete,
        projective=projective,
    )


# ---------------------------------------------------------------------------
# neighborliness


def is_m_neighborly(fan, m) -> bool:
    """Does every m-element set of rays span a cone of the fan?

    For a simplicial fan any subset of a cone's generators spans a face,
    so it suffices that each m-subset of rays lies inside some maximal
    cone.  m above the ray count returns False.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if m > fan.n_rays:
        return False
    cone_sets = [set(c) for c in fan.max_cones]
    return all(
        any(set(sub) <= cs for cs in cone_sets)
        for sub in combinations(range(fan.n_rays), m)
    )


# ---------------------------------------------------------------------------
# constructors


def projective_space_fan(n) -> Fan:
    """Rays e_1..e_n and -(e_1+...+e_n); all n-subsets are maximal."""
    if n < 1:
        raise ValueError("n must be positive")
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays.append((-1,) * n)
    cones = list(combinations(range(n + 1), n))
    return Fan(n, rays, cones, _trusted=True)


def product_fan(f1, f2) -> Fan:
    d1, d2 = f1.dim, f2.dim
    rays = [r + (0,) * d2 for r in f1.rays] + [(0,) * d1 + r for r in f2.rays]
    shift = f1.n_rays
    cones = [
        tuple(c1) + tuple(i + shift for i in c2)
        for c1 in f1.max_cones
        for c2 in f2.max_cones
    ]
    return Fan(d1 + d2, rays, cones, _trusted=True)


def star_subdivision(fan, face) -> Fan:
    """Insert the ray through the barycenter of a cone and re-triangulate.

    face is a tuple of ray indices spanning a cone of the fan of
    dimension at least 2 (subdividing a single ray would be a no-op and
    is rejected).
    """
    face = tuple(sorted(set(int(i) for i in face)))
    if len(face) < 2:
        raise ValueError("star subdivision needs a face of dimension >= 2")
    if not any(set(face) <= set(c) for c in fan.max_cones):
        raise ValueError(f"{face} does not span a cone of the fan")
    new_ray = primitive(
        tuple(sum(fan.rays[i][j] for i in face) for j in range(fan.dim))
    )
    if new_ray in fan.rays:
        raise ValueError("barycenter ray already present in the fan")
    rays = fan.rays + (new_ray,)
    new_idx = fan.n_rays
    cones = []
    for c in fan.max_cones:
        if set(face) <= set(c):
            for i in face:
                cones.append(tuple(sorted(set(c) - {i} | {new_idx})))
        else:
            cones.append(c)
    return Fan(fan.dim, rays, cones, _trusted=True)


def blowup_pn_along_linear(n, m) -> Fan:
    """Blow up projective n-space along a torus-invariant linear subspace.

    The center is the m-dimensional orbit closure of the coordinate cone
    spanned by e_1..e_{n-m}: m = 0 blows up a point, m = n-2 a
    codimension-two subspace.  m = n-1 would be a divisor (a no-op) and
    is rejected.
    """
    if not 0 <= m <= n - 2:
        raise ValueError("need 0 <= m <= n-2")
    return star_subdivision(projective_space_fan(n), tuple(range(n - m)))


def projective_bundle_fan(base, divisors) -> Fan:
    """Fan of the projectivization of O(D_1) + ... + O(D_k).

    Fiber rays are f_1..f_{k-1} = standard basis of the new coordinates
    and f_k = -(f_1+...+f_{k-1}); the base ray v lifts with fiber
    coordinates (a_1 - a_k, ..., a_{k-1} - a_k) where a_i is the D_i
    coefficient at v.  Maximal cones pair each maximal base cone with
    each facet of the fiber simplex.  With this orientation the class of
    (fiber coordinate i) plus the pullback of D_i is independent of i
    and is the relative hyperplane class; the section-count identity in
    the tests pins the sign.
    """
    k = len(divisors)
    if k < 2:
        raise ValueError("need at least two summands")
    for d in divisors:
        if len(d.coefficients) != base.n_rays:
            raise ValueError("divisor does not match the base fan")
    db, fib = base.dim, k - 1
    rays = []
    for rho, v in enumerate(base.rays):
        a = [d.coefficients[rho] for d in divisors]
        rays.append(v + tuple(a[i] - a[k - 1] for i in range(fib)))
    for i in range(fib):
        rays.append((0,) * db + tuple(1 if j == i else 0 for j in range(fib)))
    rays.append((0,) * db + (-1,) * fib)
    n = base.n_rays
    fiber_idx = range(n, n + k)
    cones = []
    for c in base.max_cones:
        for omit in fiber_idx:
            fiber_part = [i for i in fiber_idx if i != omit]
            cones.append(tuple(sorted(list(c) + fiber_part)))
    return Fan(db + fib, rays, cones, _trusted=True)


def bundle_o1_divisor(base, divisors, d=1, twist=None) -> TorusInvariantDivisor:
    """Divisor on the bundle fan with class d*(relative hyperplane) + p*(twist).

    Uses the representative d*(last fiber divisor + pullback of D_k);
    any other index gives a linearly equivalent divisor.
    """
    k = len(divisors)
    coeffs = [d * c for c in divisors[-1].coefficients]
    if twist is not None:
        coeffs = [a + b for a, b in zip(coeffs, twist.coefficients)]
    coeffs += [0] * (k - 1) + [d]
    return TorusInvariantDivisor(tuple(coeffs))


def pullback_to_bundle(base, divisors, div) -> TorusInvariantDivisor:
    """Pullback of a base divisor along the bundle projection."""
    return TorusInvariantDivisor(tuple(div.coefficients) + (0,) * len(divisors))


# ---------------------------------------------------------------------------
# divisors and sections


def divisor_polytope(fan, div):
    """Half-space list for {u : <u, v_rho> >= -a_rho}, one row per ray."""
    if len(div.coefficients) != fan.n_rays:
        raise ValueError("divisor does not match the fan")
    return tuple((r, a) for r, a in zip(fan.rays, div.coefficients))


def _normalize_row(row):
    coeffs, c = row
    g = 0
    for x in coeffs:
        g = gcd(g, x)
    g = gcd(g, c)
    if g > 1:
        return (tuple(x // g for x in coeffs), c // g)
    return (tuple(coeffs), c)


def _dedupe_rows(rows):
    """Keep only the binding constant for each coefficient pattern."""
    best = {}
    for coeffs, c in rows:
        if coeffs in best:
            best[coeffs] = min(best[coeffs], c)
        else:
            best[coeffs] = c
    return [(k, v) for k, v in sorted(best.items())]


def _eliminate_var(rows, j):
    """Fourier-Motzkin step removing variable j from (coeffs, c) rows."""
    passthrough = []
    pos = []
    neg = []
    for row in rows:
        a = row[0][j]
        if a == 0:
            passthrough.append(row)
        elif a > 0:
            pos.append(row)
        else:
            neg.append(row)
    out = list(passthrough)
    for p in pos:
        ap = p[0][j]
        for q in neg:
            aq = q[0][j]
            coeffs = tuple(-aq * x + ap * y for x, y in zip(p[0], q[0]))
            out.append(_normalize_row((coeffs, -aq * p[1] + ap * q[1])))
    return _dedupe_rows(out)


def count_sections(fan, div) -> int:
    """Number of lattice points of the divisor polytope.

    Exact recursive enumeration: Fourier-Motzkin projects the constraint
    system down one coordinate at a time, then prefixes are walked with
    the exact integer bounds each level provides.  Unbounded polytopes
    (the fan is not complete) are rejected; an empty polytope counts 0.
    """
    if fan.dim > 8:
        raise ValueError("section counting is capped at ambient dimension 8")
    d = fan.dim
    rows = [
        _normalize_row((tuple(r), int(a))) for r, a in divisor_polytope(fan, div)
    ]
    systems = [None] * (d + 1)
    systems[d] = _dedupe_rows(rows)
    for j in range(d, 1, -1):
        systems[j - 1] = _eliminate_var(systems[j], j - 1)
    # constant rows either prove emptiness or are vacuous
    for sys_rows in systems[1:]:
        for coeffs, c in sys_rows:
            if not any(coeffs) and c < 0:
                return 0

    def count_level(j, prefix):
        lo = None
        hi = None
        for coeffs, c in systems[j]:
            a = coeffs[j - 1]
            if a == 0:
                continue
            rest = c + sum(coeffs[i] * prefix[i] for i in range(j - 1))
            # constraint: a * u_j + rest >= 0
            if a > 0:
                cand = -(rest // a)
                lo = cand if lo is None else max(lo, cand)
            else:
                cand = rest // (-a)
                hi = cand if hi is None else min(hi, cand)
        if lo is None or hi is None:
            raise ValueError("unbounded divisor polytope; is the fan complete?")
        if hi < lo:
            return 0
        if j == d:
            return hi - lo + 1
        return sum(count_level(j + 1, prefix + (u,)) for u in range(lo, hi + 1))

    return count_level(1, ())
