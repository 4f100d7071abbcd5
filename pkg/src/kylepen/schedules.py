"""Odd non-decreasing demand schedules with jumps, and their generalized inverses.

A schedule is stored on [0, 1] only as a list of nodes with one-sided values;
all queries on [-1, 0) mirror through oddness.  The value at an interior jump
follows left-continuity for v > 0 (and by oddness the right value for v < 0);
X(0) = 0 always.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError


class DemandSchedule:
    """Piecewise-linear-with-jumps map v -> X(v), odd and non-decreasing.

    ``nodes`` is an increasing grid 0 = v_0 < ... < v_m = 1; ``left[k]`` and
    ``right[k]`` are the one-sided values at node k.  Between nodes the
    schedule interpolates linearly from right[k] to left[k+1].
    """

    def __init__(self, nodes, left, right):
        nodes = np.asarray(nodes, dtype=float)
        left = np.asarray(left, dtype=float)
        right = np.asarray(right, dtype=float)
        # scalar validation: the arrays are tiny, so looping beats reductions
        nl, ll, rl = nodes.tolist(), left.tolist(), right.tolist()
        if nl[0] != 0.0 or nl[-1] != 1.0:
            raise DomainError("nodes must span [0, 1]")
        if ll[0] != 0.0:
            raise DomainError("X(0) must be 0")
        for k in range(len(nl)):
            if k and nl[k] <= nl[k - 1]:
                raise DomainError("nodes must be strictly increasing")
            if ll[k] > rl[k] + 1e-15 or (k and rl[k - 1] > ll[k] + 1e-15):
                raise DomainError("schedule must be non-decreasing")
            if ll[k] < -1e-15 or rl[k] > 1.0 + 1e-12:
                raise DomainError("values must lie in [0, 1]")
        self.nodes = nodes
        self.left = np.minimum(left, right)
        self.right = np.minimum(right, 1.0)
        # value at v = 1 is the left-continuous one
        self.right[-1] = self.left[-1]
        self._inv = None

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def identity(cls):
        return cls([0.0, 1.0], [0.0, 1.0], [0.0, 1.0])

    @classmethod
    def zero(cls):
        return cls([0.0, 1.0], [0.0, 0.0], [0.0, 0.0])

    @classmethod
    def proportional(cls, beta: float):
        if not 0.0 <= beta <= 1.0:
            raise DomainError("slope must lie in [0, 1]")
        return cls([0.0, 1.0], [0.0, beta], [0.0, beta])

    @classmethod
    def step_mimic(cls, cutoff: float):
        """X(v) = v above the cutoff, 0 below (value 0 AT the cutoff)."""
        if cutoff <= 0.0:
            return cls.identity()
        if cutoff >= 1.0:
            return cls.zero()
        return cls([0.0, cutoff, 1.0], [0.0, 0.0, 1.0], [0.0, cutoff, 1.0])

    @classmethod
    def from_samples(cls, vs, xs, jump_tol: float):
        """Compress per-grid-point maximisers into a schedule.

        A gap larger than ``jump_tol`` between adjacent samples is treated as
        a jump located at the right sample; collinear interior samples are
        dropped.
        """
        vs = np.asarray(vs, dtype=float)
        xs = np.asarray(xs, dtype=float)
        jumps = np.diff(xs) > jump_tol
        nodes, left, right = [vs[0]], [xs[0]], [xs[0]]
        for i in range(1, len(vs)):
            if jumps[i - 1]:
                # jump located at the right sample
                nodes.append(vs[i])
                left.append(xs[i - 1])
                right.append(xs[i])
            elif (
                len(nodes) >= 2
                and left[-1] == right[-1]
                and right[-2] <= left[-1]
                and abs(
                    right[-2]
                    + (left[-1] - right[-2])
                    * (vs[i] - nodes[-2])
                    / (nodes[-1] - nodes[-2])
                    - xs[i]
                )
                < 1e-12
            ):
                # collinear with the current linear piece: extend it
                nodes[-1], left[-1], right[-1] = vs[i], xs[i], xs[i]
            else:
                nodes.append(vs[i])
                left.append(xs[i])
                right.append(xs[i])
        xs0 = np.clip(np.asarray(left), 0.0, 1.0)
        xs1 = np.clip(np.asarray(right), 0.0, 1.0)
        xs0[0] = 0.0
        return cls(np.asarray(nodes), xs0, xs1)

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------
    @property
    def x_max(self) -> float:
        """X(1), the largest equilibrium order."""
        return float(self.left[-1])

    def __call__(self, v):
        return self.evaluate(v)

    def evaluate(self, v):
        shape = np.shape(v)
        v = np.atleast_1d(np.asarray(v, dtype=float))
        if np.any(np.abs(v) > 1.0 + 1e-12):
            raise DomainError("schedule argument outside [-1, 1]")
        out = np.sign(v) * self._eval_pos(np.minimum(np.abs(v), 1.0))
        out = out + 0.0  # normalise -0.0
        return float(out[0]) if shape == () else out.reshape(shape)

    def _eval_pos(self, v):
        k = np.searchsorted(self.nodes, v, side="left")
        out = np.empty_like(v)
        exact = self.nodes[np.minimum(k, len(self.nodes) - 1)] == v
        out[exact] = self.left[np.minimum(k, len(self.nodes) - 1)[exact]] if exact.any() else 0.0
        mid = ~exact
        if mid.any():
            km = k[mid] - 1
            v0 = self.nodes[km]
            v1 = self.nodes[km + 1]
            a = self.right[km]
            b = self.left[km + 1]
            out[mid] = a + (b - a) * (v[mid] - v0) / (v1 - v0)
        return out

    # ------------------------------------------------------------------
    # generalized inverses
    # ------------------------------------------------------------------
    def _inverse_pieces(self):
        """Contiguous cover of [0, x_max] in x by linear pieces of the inverse.

        Increasing segments of X invert to linear pieces; jumps of X invert to
        constant pieces; flats of X occupy no x-measure and appear as v-gaps
        between adjacent pieces (where the inverse itself jumps).
        """
        if self._inv is not None:
            return self._inv
        xlo, xhi, vlo, vhi = [], [], [], []
        m = len(self.nodes) - 1
        if self.right[0] > 0.0:  # jump at the origin
            xlo.append(0.0)
            xhi.append(self.right[0])
            vlo.append(0.0)
            vhi.append(0.0)
        for k in range(m):
            a, b = self.right[k], self.left[k + 1]
            if b > a:
                xlo.append(a)
                xhi.append(b)
                vlo.append(self.nodes[k])
                vhi.append(self.nodes[k + 1])
            if k + 1 < m and self.right[k + 1] > self.left[k + 1]:
                xlo.append(self.left[k + 1])
                xhi.append(self.right[k + 1])
                vlo.append(self.nodes[k + 1])
                vhi.append(self.nodes[k + 1])
        self._inv = tuple(np.asarray(a) for a in (xlo, xhi, vlo, vhi))
        return self._inv

    def _inv_pos(self, x, rule: str):
        """Evaluate the inverse on [0, x_max]; boundary x maps to the left or
        right piece according to ``rule``."""
        xlo, xhi, vlo, vhi = self._inverse_pieces()
        x = np.asarray(x, dtype=float)
        if len(xlo) == 0:  # identically-zero schedule
            return np.full_like(x, 1.0 if rule == "right" else 0.0)
        xs = np.append(xlo, xhi[-1])
        side = "left" if rule == "left" else "right"
        i = np.clip(np.searchsorted(xs, x, side=side) - 1, 0, len(xlo) - 1)
        span = xhi[i] - xlo[i]
        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.where(span > 0, (x - xlo[i]) / np.where(span > 0, span, 1.0), 0.0)
        return vlo[i] + t * (vhi[i] - vlo[i])

    def inverse_left(self, x):
        """inf{v : X(v) >= x} over the full domain [-1, 1]."""
        return self._inverse(x, left=True)

    def inverse_right(self, x):
        """sup{v : X(v) <= x} over the full domain [-1, 1]."""
        return self._inverse(x, left=False)

    def _inverse(self, x, left: bool):
        shape = np.shape(x)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        xm = self.x_max
        if np.any(np.abs(x) > xm + 1e-12):
            raise DomainError("inverse argument outside [-x_max, x_max]")
        x = np.clip(x, -xm, xm)
        out = np.empty_like(x)
        if left:
            pos = x > 0
            out[pos] = self._inv_pos(x[pos], "left")
            out[~pos] = -self._inv_right_boundary(-x[~pos])
        else:
            pos = x >= 0
            out[pos] = self._inv_right_boundary(x[pos])
            out[~pos] = -self._inv_pos(-x[~pos], "left")
        return float(out[0]) if shape == () else out.reshape(shape)

    def _inv_right_boundary(self, x):
        # sup{v : X(v) <= x} for x >= 0; the top of the domain maps to 1
        out = self._inv_pos(x, "right")
        return np.where(x >= self.x_max, 1.0, out)

    def inverse_limit(self, x: float, side: str) -> float:
        """One-sided limit of the (a.e.-common) inverse at x; side is '-' or '+'."""
        if x > 0 or (x == 0 and side == "+"):
            rule = "left" if side == "-" else "right"
            return float(self._inv_pos(np.asarray(min(x, self.x_max)), rule))
        return -self.inverse_limit(-x, "+" if side == "-" else "-")

    def inverse_integral(self, p: float, q: float) -> float:
        """Exact integral of the inverse over [p, q] within [-x_max, x_max].

        The left and right inverses agree outside a countable set, so the
        integral is unambiguous.
        """
        if q < p:
            return -self.inverse_integral(q, p)

        def anti(t):  # integral over [0, t], t >= 0
            xlo, xhi, vlo, vhi = self._inverse_pieces()
            if len(xlo) == 0:
                return 0.0
            total = 0.0
            for a, b, va, vb in zip(xlo, xhi, vlo, vhi):
                if t <= a:
                    break
                u = min(t, b)
                frac = (u - a) / (b - a) if b > a else 0.0
                vu = va + frac * (vb - va)
                total += (u - a) * 0.5 * (va + vu)
            return total

        # the inverse is odd a.e., so its antiderivative is even
        return anti(abs(q)) - anti(abs(p))

    # ------------------------------------------------------------------
    # exact polynomial integrals over the piecewise representation
    # ------------------------------------------------------------------
    def segment_arrays(self):
        """(v0, v1, a, b): each linear piece runs from (v0, a) to (v1, b)."""
        return (
            self.nodes[:-1],
            self.nodes[1:],
            self.right[:-1],
            self.left[1:],
        )

    def integrate(self, f) -> float:
        """Exact integral over [0, 1] of f(v, X(v)) when f is polynomial of
        joint degree <= 2 on each piece (Simpson is exact there)."""
        v0, v1, a, b = self.segment_arrays()
        vm = 0.5 * (v0 + v1)
        xm = 0.5 * (a + b)
        h = v1 - v0
        return float(np.sum(h / 6.0 * (f(v0, a) + 4.0 * f(vm, xm) + f(v1, b))))

    def integral_upto(self, v: float) -> float:
        """Exact integral of X over [0, v] (odd integrand, so |v| suffices)."""
        if abs(v) > 1.0 + 1e-12:
            raise DomainError("argument outside [-1, 1]")
        t = min(abs(v), 1.0)
        v0, v1, a, b = self.segment_arrays()
        total = 0.0
        for p, q, xa, xb in zip(v0, v1, a, b):
            if t <= p:
                break
            u = min(t, q)
            xu = xa + (xb - xa) * (u - p) / (q - p)
            total += (u - p) * 0.5 * (xa + xu)
        return total

    # ------------------------------------------------------------------
    # emission
    # ------------------------------------------------------------------
    def sample_rows(self, n: int = 1001):
        """(v, X(v)) rows on a uniform grid with duplicated rows at jumps so
        that plots render verticals faithfully."""
        grid = np.linspace(-1.0, 1.0, n)
        jump_nodes = []
        for k in range(len(self.nodes)):
            if self.right[k] > self.left[k]:
                jump_nodes.append(self.nodes[k])
        rows = []
        for v in grid:
            rows.append((v, self.evaluate(v)))
        for v in jump_nodes:
            if v > 0.0 or self.right[0] > 0.0:
                rows.append((v, float(self.left[self.nodes == v][0])))
                rows.append((v, float(self.right[self.nodes == v][0])))
            if v > 0.0:
                rows.append((-v, -float(self.left[self.nodes == v][0])))
                rows.append((-v, -float(self.right[self.nodes == v][0])))
        rows.sort(key=lambda r: (r[0], r[1]))
        return rows

    def __repr__(self):
        return f"DemandSchedule(nodes={self.nodes!r}, x_max={self.x_max:.6g})"
