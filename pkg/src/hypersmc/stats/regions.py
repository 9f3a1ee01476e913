"""Acceptance regions D inside the unit cube [0,1]^n, with the two queries the
verification engines need: closed-set membership of an estimated point, and
an axis-aligned box around an interior point that stays inside the region.

Boxes are slack-equalized per variant rather than volume-optimal; after the
symmetric solve the sides are greedily expanded where the cube boundary left
room. All regions are treated as closed sets. Boxes may touch a region
boundary of measure zero; membership of the true point on that boundary is
excluded by assumption, so the statistical claims are unaffected.
"""

from dataclasses import dataclass
import itertools

_BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class Box:
    """Axis-aligned product of closed intervals inside [0,1]^n."""

    intervals: tuple

    def __post_init__(self):
        for lo, hi in self.intervals:
            if not (0.0 <= lo <= hi <= 1.0):
                raise ValueError(f"invalid box interval [{lo}, {hi}]")

    @property
    def dimension(self) -> int:
        return len(self.intervals)

    def contains(self, point) -> bool:
        return all(lo <= x <= hi for (lo, hi), x in zip(self.intervals, point))

    def corners(self):
        return itertools.product(*self.intervals)


def _clip01(x: float) -> float:
    return min(1.0, max(0.0, x))


class Region:
    """Base class; subclasses define membership, interior, box, complement."""

    dimension: int

    def contains(self, point) -> bool:
        raise NotImplementedError

    def _interior(self, point) -> bool:
        """Interior relative to the unit cube."""
        raise NotImplementedError

    def largest_box(self, point):
        if len(point) != self.dimension:
            raise ValueError(f"point has {len(point)} coordinates, region has dimension {self.dimension}")
        if not all(0.0 <= x <= 1.0 for x in point):
            raise ValueError(f"point {point} outside the unit cube")
        if not self._interior(point):
            return None
        return self._box(point)

    def _box(self, point) -> Box:
        raise NotImplementedError

    def complement(self) -> "Region":
        raise NotImplementedError


class BoxProduct(Region):
    """D itself is a product of intervals; the box query returns D."""

    def __init__(self, intervals):
        self.intervals = tuple((float(lo), float(hi)) for lo, hi in intervals)
        self.dimension = len(self.intervals)
        for lo, hi in self.intervals:
            if not (0.0 <= lo < hi <= 1.0):
                raise ValueError(f"degenerate interval [{lo}, {hi}]")

    def contains(self, point):
        return all(lo <= x <= hi for (lo, hi), x in zip(self.intervals, point))

    def _interior(self, point):
        for (lo, hi), x in zip(self.intervals, point):
            if not ((x > lo or lo <= 0.0) and (x < hi or hi >= 1.0)):
                return False
            if not (lo <= x <= hi):
                return False
        return True

    def _box(self, point):
        return Box(self.intervals)

    def complement(self):
        return _BoxComplement(self.intervals)


class _BoxComplement(Region):
    """Complement of a box inside the cube; box query returns a slab beyond
    the most violated face, with a midpoint margin so the slab has no overlap
    of positive measure with the box."""

    def __init__(self, intervals):
        self.intervals = tuple(intervals)
        self.dimension = len(self.intervals)

    def contains(self, point):
        return any(x < lo or x > hi for (lo, hi), x in zip(self.intervals, point))

    def _interior(self, point):
        return any(x < lo - _BOUNDARY_TOL or x > hi + _BOUNDARY_TOL
                   for (lo, hi), x in zip(self.intervals, point))

    def _box(self, point):
        best = None
        for d, (lo, hi) in enumerate(self.intervals):
            x = point[d]
            if x > hi + _BOUNDARY_TOL:
                slack = x - hi
                cand = (slack, d, ((hi + x) / 2.0, 1.0))
            elif x < lo - _BOUNDARY_TOL:
                slack = lo - x
                cand = (slack, d, (0.0, (lo + x) / 2.0))
            else:
                continue
            if best is None or cand[0] > best[0]:
                best = cand
        _, dim, interval = best
        sides = [(0.0, 1.0)] * self.dimension
        sides[dim] = interval
        return Box(tuple(sides))

    def complement(self):
        return BoxProduct(self.intervals)


class LowerHalfLine(Region):
    """One-dimensional D = [0, p]."""

    def __init__(self, p):
        if not (0.0 < p <= 1.0):
            raise ValueError(f"upper endpoint must lie in (0, 1], got {p}")
        self.p = float(p)
        self.dimension = 1

    def contains(self, point):
        return point[0] <= self.p

    def _interior(self, point):
        return point[0] < self.p

    def _box(self, point):
        return Box(((0.0, self.p),))

    def complement(self):
        return UpperHalfLine(self.p)


class UpperHalfLine(Region):
    """One-dimensional D = [p, 1]."""

    def __init__(self, p):
        if not (0.0 <= p < 1.0):
            raise ValueError(f"lower endpoint must lie in [0, 1), got {p}")
        self.p = float(p)
        self.dimension = 1

    def contains(self, point):
        return point[0] >= self.p

    def _interior(self, point):
        return point[0] > self.p

    def _box(self, point):
        return Box(((self.p, 1.0),))

    def complement(self):
        return LowerHalfLine(self.p)


class AbsDiffLE(Region):
    """D = { x : |x_i - x_j| <= delta }, free in the remaining coordinates."""

    def __init__(self, n, i, j, delta):
        if not (0 <= i < n and 0 <= j < n and i != j):
            raise ValueError(f"bad coordinate pair ({i}, {j}) for dimension {n}")
        if not (0.0 < delta):
            raise ValueError(f"delta must be positive, got {delta}")
        self.dimension = n
        self.i, self.j, self.delta = i, j, float(delta)

    def _diff(self, point):
        return point[self.i] - point[self.j]

    def contains(self, point):
        return abs(self._diff(point)) <= self.delta + _BOUNDARY_TOL

    def _interior(self, point):
        return abs(self._diff(point)) < self.delta - _BOUNDARY_TOL

    def _box(self, point):
        # symmetric slack split, then one outward pass into room left by the
        # cube clipping; corners (hi_i, lo_j) and (hi_j, lo_i) end <= delta
        r = (self.delta - abs(self._diff(point))) / 2.0
        xi, xj = point[self.i], point[self.j]
        lo_i0, hi_i0 = _clip01(xi - r), _clip01(xi + r)
        lo_j0, hi_j0 = _clip01(xj - r), _clip01(xj + r)
        hi_i = min(1.0, lo_j0 + self.delta)
        lo_i = max(0.0, hi_j0 - self.delta)
        hi_j = min(1.0, lo_i + self.delta)
        lo_j = max(0.0, hi_i - self.delta)
        sides = [(0.0, 1.0)] * self.dimension
        sides[self.i] = (min(lo_i, lo_i0), max(hi_i, hi_i0))
        sides[self.j] = (min(lo_j, lo_j0), max(hi_j, hi_j0))
        return Box(tuple(sides))

    def complement(self):
        return AbsDiffGE(self.dimension, self.i, self.j, self.delta)


class AbsDiffGE(Region):
    """D = { x : |x_i - x_j| >= delta }."""

    def __init__(self, n, i, j, delta):
        if not (0 <= i < n and 0 <= j < n and i != j):
            raise ValueError(f"bad coordinate pair ({i}, {j}) for dimension {n}")
        if not (0.0 < delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {delta}")
        self.dimension = n
        self.i, self.j, self.delta = i, j, float(delta)

    def _diff(self, point):
        return point[self.i] - point[self.j]

    def contains(self, point):
        return abs(self._diff(point)) >= self.delta - _BOUNDARY_TOL

    def _interior(self, point):
        return abs(self._diff(point)) > self.delta + _BOUNDARY_TOL

    def _box(self, point):
        # only the facing corner (lo of the larger coordinate, hi of the
        # smaller) binds: split the slack evenly between the two
        d = self._diff(point)
        r = (abs(d) - self.delta) / 2.0
        if d > 0:
            hi_dim, lo_dim = self.i, self.j
        else:
            hi_dim, lo_dim = self.j, self.i
        xh, xl = point[hi_dim], point[lo_dim]
        sides = [(0.0, 1.0)] * self.dimension
        sides[hi_dim] = (_clip01(xh - r), 1.0)
        sides[lo_dim] = (0.0, _clip01(xl + r))
        return Box(tuple(sides))

    def complement(self):
        return AbsDiffLE(self.dimension, self.i, self.j, self.delta)


class HalfspaceConj(Region):
    """Conjunction of halfspaces a.x <= b intersected with the cube."""

    def __init__(self, n, constraints):
        self.dimension = n
        self.constraints = tuple((tuple(float(c) for c in coeffs), float(bound))
                                 for coeffs, bound in constraints)
        for coeffs, _ in self.constraints:
            if len(coeffs) != n:
                raise ValueError("constraint arity does not match dimension")
            if all(c == 0.0 for c in coeffs):
                raise ValueError("degenerate all-zero constraint")

    def contains(self, point):
        return all(sum(c * x for c, x in zip(coeffs, point)) <= b + _BOUNDARY_TOL
                   for coeffs, b in self.constraints)

    def _interior(self, point):
        return all(sum(c * x for c, x in zip(coeffs, point)) < b - _BOUNDARY_TOL
                   for coeffs, b in self.constraints)

    def _box_at_scale(self, point, s):
        return Box(tuple((_clip01(x - s), _clip01(x + s)) for x in point))

    def _valid(self, box):
        # worst corner of each constraint computed coordinate-wise
        for coeffs, b in self.constraints:
            worst = 0.0
            for c, (lo, hi) in zip(coeffs, box.intervals):
                worst += max(c * lo, c * hi)
            if worst > b + _BOUNDARY_TOL:
                return False
        return True

    def _box(self, point):
        lo, hi = 0.0, 1.0
        if self._valid(self._box_at_scale(point, hi)):
            return self._box_at_scale(point, hi)
        for _ in range(60):
            mid = (lo + hi) / 2.0
            if self._valid(self._box_at_scale(point, mid)):
                lo = mid
            else:
                hi = mid
        if lo == 0.0:
            return None
        return self._box_at_scale(point, lo)

    def complement(self):
        return _HalfspaceUnion(self.dimension, self.constraints)


class _HalfspaceUnion(Region):
    """Union of reversed halfspaces a.x >= b: the complement of a conjunction."""

    def __init__(self, n, constraints):
        self.dimension = n
        self.constraints = tuple(constraints)

    def contains(self, point):
        return any(sum(c * x for c, x in zip(coeffs, point)) >= b - _BOUNDARY_TOL
                   for coeffs, b in self.constraints)

    def _interior(self, point):
        return any(sum(c * x for c, x in zip(coeffs, point)) > b + _BOUNDARY_TOL
                   for coeffs, b in self.constraints)

    def _box(self, point):
        # pick the most violated constraint and build a box inside its
        # reversed halfspace {a.x >= b}; only the corner minimizing a.x binds
        best = None
        for coeffs, b in self.constraints:
            slack = sum(c * x for c, x in zip(coeffs, point)) - b
            if slack <= _BOUNDARY_TOL:
                continue
            norm = sum(abs(c) for c in coeffs)
            if best is None or slack / norm > best[0]:
                best = (slack / norm, coeffs, slack)
        _, coeffs, slack = best
        nz = sum(1 for c in coeffs if c != 0.0)
        sides = []
        for c, x in zip(coeffs, point):
            if c == 0.0:
                sides.append((0.0, 1.0))
            else:
                r = slack / (nz * abs(c))
                if c > 0:
                    sides.append((_clip01(x - r), 1.0))
                else:
                    sides.append((0.0, _clip01(x + r)))
        return Box(tuple(sides))

    def complement(self):
        return HalfspaceConj(self.dimension, self.constraints)


def largest_box(point, region: Region):
    """Axis-aligned box containing ``point`` and contained in ``region``.

    Returns None when the point is not in the interior of the region
    (relative to the unit cube).
    """
    return region.largest_box(tuple(point))
