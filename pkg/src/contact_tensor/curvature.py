"""Levi-Civita connection and curvature in a fixed frame.

Everything is computed against the frame fields, never in coordinates.  The
connection comes from the Koszul formula

    2 g(nabla_X Y, Z) = X g(Y,Z) + Y g(Z,X) - Z g(X,Y)
                        - g(X,[Y,Z]) - g(Y,[X,Z]) + g(Z,[X,Y])

on basis triples; with a parameter-only metric the derivative terms vanish
but they are kept in the implementation so the formula stays literal.  The
curvature convention is R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z
- nabla_[X,Y] Z, and the Ricci tensor is the trace of X -> R(X,Y)Z over the
first slot, which agrees with the orthonormal-frame contraction for every
metric while staying inside exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expr import Expr
from .frame import FrameManifold, VectorField


class ConnectionTable:
    """Christoffel data: nabla_{e_i} e_j expanded over the frame."""

    def __init__(self, manifold: FrameManifold, rows):
        self.manifold = manifold
        self._rows = rows  # rows[i][j] = nabla_{e_(i+1)} e_(j+1)

    def nabla_basis(self, i: int, j: int) -> VectorField:
        return self._rows[i - 1][j - 1]

    def gamma(self, i: int, j: int, k: int) -> Expr:
        """Component Gamma^k_ij of nabla_{e_i} e_j along e_k."""
        return self._rows[i - 1][j - 1].components[k - 1]

    def covariant_derivative(self, x: VectorField, y: VectorField) -> VectorField:
        """nabla_x y, including the derivative terms on y's components."""
        m = self.manifold
        out = VectorField.zero(m.dim)
        for i in range(1, m.dim + 1):
            xi = x.components[i - 1]
            if xi.is_zero():
                continue
            deriv = VectorField(tuple(
                m.directional_derivative(i, c) for c in y.components))
            out = out + deriv.scale(xi)
            for j in range(1, m.dim + 1):
                yj = y.components[j - 1]
                if not yj.is_zero():
                    out = out + self._rows[i - 1][j - 1].scale(xi * yj)
        return out


def koszul(manifold: FrameManifold) -> ConnectionTable:
    """Levi-Civita connection of the frame metric via the Koszul formula."""
    m = manifold
    dim = m.dim
    ginv = m.metric_inverse()
    half = Expr.rational(1, 2)
    rows = []
    for i in range(1, dim + 1):
        row = []
        for j in range(1, dim + 1):
            rhs = []
            for k in range(1, dim + 1):
                ei, ej, ek = m.basis(i), m.basis(j), m.basis(k)
                val = (m.directional_derivative(i, m.metric_entry(j, k))
                       + m.directional_derivative(j, m.metric_entry(k, i))
                       - m.directional_derivative(k, m.metric_entry(i, j))
                       - m.g(ei, m.bracket_basis(j, k))
                       - m.g(ej, m.bracket_basis(i, k))
                       + m.g(ek, m.bracket_basis(i, j)))
                rhs.append(half * val)  # rhs[k-1] = g(nabla_{e_i} e_j, e_k)
            # raise the free index: Gamma^l_ij = sum_k rhs_k (g^{-1})_kl
            comps = []
            for l in range(dim):
                acc = Expr.zero()
                for k in range(dim):
                    acc = acc + rhs[k] * ginv[k][l]
                comps.append(acc)
            row.append(VectorField(tuple(comps)))
        rows.append(tuple(row))
    return ConnectionTable(m, tuple(rows))


@dataclass(frozen=True)
class StructureDerivatives:
    """Covariant derivatives of the structure tensors phi, eta, xi."""

    nabla_phi: tuple      # [i][j] -> (nabla_{e_i} phi)(e_j) as a VectorField
    nabla_eta: tuple      # [i][j] -> (nabla_{e_i} eta)(e_j) as an Expr
    nabla_xi: tuple       # [i] -> nabla_{e_i} xi as a VectorField


class CurvatureTables:
    """Riemann, Ricci and scalar curvature plus lazily memoized nabla R.

    All eager tables are computed at construction and never mutated.  The
    nabla R cache only grows and each entry is a pure function of the index,
    so concurrent readers at worst duplicate a computation.
    """

    def __init__(self, manifold: FrameManifold, connection: ConnectionTable):
        self.manifold = manifold
        self.connection = connection
        dim = manifold.dim
        self._riemann = tuple(
            tuple(
                tuple(self._riemann_basis(i, j, k)
                      for k in range(1, dim + 1))
                for j in range(1, dim + 1))
            for i in range(1, dim + 1))
        self.ricci = tuple(
            tuple(self._ricci_entry(j, k) for k in range(1, dim + 1))
            for j in range(1, dim + 1))
        ginv = manifold.metric_inverse()
        q_rows = []
        for i in range(dim):
            comps = [Expr.zero()] * dim
            for j in range(dim):
                acc = Expr.zero()
                for k in range(dim):
                    acc = acc + self.ricci[i][k] * ginv[k][j]
                comps[j] = acc
            q_rows.append(VectorField(tuple(comps)))
        self.ricci_operator = tuple(q_rows)
        scalar = Expr.zero()
        for i in range(dim):
            scalar = scalar + q_rows[i].components[i]
        self.scalar = scalar
        self._nabla_r_cache: dict[tuple[int, int, int, int], VectorField] = {}

    def _riemann_basis(self, i: int, j: int, k: int) -> VectorField:
        m, conn = self.manifold, self.connection
        if i == j:
            return VectorField.zero(m.dim)
        ei, ek = m.basis(i), m.basis(k)
        first = conn.covariant_derivative(ei, conn.nabla_basis(j, k))
        second = conn.covariant_derivative(m.basis(j), conn.nabla_basis(i, k))
        third = conn.covariant_derivative(m.bracket_basis(i, j), ek)
        return first - second - third

    def riemann(self, i: int, j: int, k: int) -> VectorField:
        """R(e_i, e_j) e_k as a frame vector field."""
        return self._riemann[i - 1][j - 1][k - 1]

    def riemann_apply(self, x: VectorField, y: VectorField,
                      z: VectorField) -> VectorField:
        """Tensor contraction R(X, Y)Z, function-linear in all slots."""
        m = self.manifold
        out = VectorField.zero(m.dim)
        for i in range(m.dim):
            xi = x.components[i]
            if xi.is_zero():
                continue
            for j in range(m.dim):
                yj = y.components[j]
                if yj.is_zero() or i == j:
                    continue
                for k in range(m.dim):
                    zk = z.components[k]
                    if zk.is_zero():
                        continue
                    out = out + self._riemann[i][j][k].scale(xi * yj * zk)
        return out

    def _ricci_entry(self, j: int, k: int) -> Expr:
        # trace over the first slot: sum_l component l of R(e_l, e_j) e_k
        total = Expr.zero()
        for l in range(1, self.manifold.dim + 1):
            total = total + self._riemann[l - 1][j - 1][k - 1].components[l - 1]
        return total

    def is_flat(self) -> bool:
        dim = self.manifold.dim
        return all(self._riemann[i][j][k].is_zero()
                   for i in range(dim) for j in range(dim) for k in range(dim))

    def nabla_r(self, w: int, i: int, j: int, k: int) -> VectorField:
        """(nabla_{e_w} R)(e_i, e_j) e_k, lazily computed and memoized:

        nabla_w (R(e_i,e_j)e_k) - R(nabla_w e_i, e_j)e_k
        - R(e_i, nabla_w e_j)e_k - R(e_i,e_j)(nabla_w e_k).
        """
        key = (w, i, j, k)
        cached = self._nabla_r_cache.get(key)
        if cached is not None:
            return cached
        m, conn = self.manifold, self.connection
        ew = m.basis(w)
        ei, ej, ek = m.basis(i), m.basis(j), m.basis(k)
        out = conn.covariant_derivative(ew, self.riemann(i, j, k))
        out = out - self.riemann_apply(conn.nabla_basis(w, i), ej, ek)
        out = out - self.riemann_apply(ei, conn.nabla_basis(w, j), ek)
        out = out - self.riemann_apply(ei, ej, conn.nabla_basis(w, k))
        self._nabla_r_cache[key] = out
        return out


def riemann(manifold: FrameManifold, connection: ConnectionTable) -> CurvatureTables:
    return CurvatureTables(manifold, connection)


def nabla_structure_tensors(connection: ConnectionTable,
                            structure) -> StructureDerivatives:
    """Covariant derivatives of phi, eta, xi against the frame.

    (nabla_X phi)(Y) = nabla_X (phi Y) - phi(nabla_X Y)
    (nabla_X eta)(Y) = X(eta Y) - eta(nabla_X Y)
    """
    m = connection.manifold
    dim = m.dim
    nphi, neta, nxi = [], [], []
    for i in range(1, dim + 1):
        ei = m.basis(i)
        phi_row, eta_row = [], []
        for j in range(1, dim + 1):
            ej = m.basis(j)
            dphi = connection.covariant_derivative(
                ei, structure.apply_phi(ej))
            dphi = dphi - structure.apply_phi(connection.nabla_basis(i, j))
            phi_row.append(dphi)
            deta = m.directional_derivative(i, structure.eta.components[j - 1])
            deta = deta - structure.eta.apply(connection.nabla_basis(i, j))
            eta_row.append(deta)
        nphi.append(tuple(phi_row))
        neta.append(tuple(eta_row))
        nxi.append(connection.covariant_derivative(ei, structure.xi))
    return StructureDerivatives(tuple(nphi), tuple(neta), tuple(nxi))


# ---------------------------------------------------------------------------
# identity checks; each returns a list of (indices, residual) pairs and an
# empty list certifies the identity exactly

def torsion_residuals(conn: ConnectionTable) -> list:
    m = conn.manifold
    out = []
    for i in range(1, m.dim + 1):
        for j in range(i + 1, m.dim + 1):
            res = (conn.nabla_basis(i, j) - conn.nabla_basis(j, i)
                   - m.bracket_basis(i, j))
            if not res.is_zero():
                out.append(((i, j), res))
    return out


def metric_compat_residuals(conn: ConnectionTable) -> list:
    m = conn.manifold
    out = []
    for i in range(1, m.dim + 1):
        for j in range(1, m.dim + 1):
            for k in range(j, m.dim + 1):
                ej, ek = m.basis(j), m.basis(k)
                res = (m.directional_derivative(i, m.metric_entry(j, k))
                       - m.g(conn.nabla_basis(i, j), ek)
                       - m.g(ej, conn.nabla_basis(i, k)))
                if not res.is_zero():
                    out.append(((i, j, k), res))
    return out


def riemann_symmetry_residuals(curv: CurvatureTables) -> list:
    """Antisymmetry in both index pairs and the pair interchange symmetry
    of the lowered tensor R(X,Y,Z,W) = g(R(X,Y)Z, W)."""
    m = curv.manifold
    dim = m.dim
    out = []

    def lowered(i, j, k, l):
        return m.g(curv.riemann(i, j, k), m.basis(l))

    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            for k in range(1, dim + 1):
                res = curv.riemann(i, j, k) + curv.riemann(j, i, k)
                if not res.is_zero():
                    out.append((("first-pair", i, j, k), res))
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            for k in range(1, dim + 1):
                for l in range(1, dim + 1):
                    r = lowered(i, j, k, l) + lowered(i, j, l, k)
                    if not r.is_zero():
                        out.append((("second-pair", i, j, k, l), r))
                    r = lowered(i, j, k, l) - lowered(k, l, i, j)
                    if not r.is_zero():
                        out.append((("interchange", i, j, k, l), r))
    return out


def first_bianchi_residuals(curv: CurvatureTables) -> list:
    out = []
    dim = curv.manifold.dim
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            for k in range(1, dim + 1):
                res = (curv.riemann(i, j, k) + curv.riemann(j, k, i)
                       + curv.riemann(k, i, j))
                if not res.is_zero():
                    out.append(((i, j, k), res))
    return out


def second_bianchi_residuals(curv: CurvatureTables) -> list:
    out = []
    dim = curv.manifold.dim
    for w in range(1, dim + 1):
        for i in range(1, dim + 1):
            for j in range(1, dim + 1):
                for k in range(1, dim + 1):
                    res = (curv.nabla_r(w, i, j, k)
                           + curv.nabla_r(i, j, w, k)
                           + curv.nabla_r(j, w, i, k))
                    if not res.is_zero():
                        out.append(((w, i, j, k), res))
    return out


def reeb_curvature_identity_residuals(curv: CurvatureTables,
                                      structure) -> list:
    """Optional check of the expansion of g(R(xi,X)Y,Z) through the
    covariant derivatives of phi and of phi h.  Holds on every contact
    metric manifold; no classifier depends on it."""
    m = curv.manifold
    conn = curv.connection
    dim = m.dim
    der = nabla_structure_tensors(conn, structure)
    xi = structure.xi
    h = structure.compute_h()

    def phih(v):
        return structure.apply_phi(h.apply(v))

    def d_phih(k, j):
        # (nabla_{e_k} (phi h)) e_j
        return (conn.covariant_derivative(m.basis(k), phih(m.basis(j)))
                - phih(conn.nabla_basis(k, j)))

    out = []
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            for k in range(1, dim + 1):
                ei, ek = m.basis(i), m.basis(k)
                lhs = m.g(curv.riemann_apply(xi, ei, m.basis(j)), ek)
                rhs = (m.g(der.nabla_phi[i - 1][j - 1], ek)
                       + m.g(d_phih(k, j) - d_phih(j, k), ei))
                res = lhs - rhs
                if not res.is_zero():
                    out.append(((i, j, k), res))
    return out


def h_direction_phi_derivative_residuals(curv: CurvatureTables,
                                         structure) -> list:
    """Optional check of the closed form for 2 (nabla_{hX} phi) Y in terms
    of curvature against the Reeb field.  Holds on every contact metric
    manifold; no classifier depends on it."""
    m = curv.manifold
    conn = curv.connection
    dim = m.dim
    h = structure.compute_h()
    xi = structure.xi
    phi = structure.apply_phi
    out = []
    for i in range(1, dim + 1):
        x = m.basis(i)
        hx = h.apply(x)
        for j in range(1, dim + 1):
            y = m.basis(j)
            lhs = (conn.covariant_derivative(hx, phi(y))
                   - phi(conn.covariant_derivative(hx, y))) \
                .scale(Expr.integer(2))
            rhs = (-curv.riemann_apply(xi, x, y)
                   - phi(curv.riemann_apply(xi, x, phi(y)))
                   + phi(curv.riemann_apply(xi, phi(x), y))
                   - curv.riemann_apply(xi, phi(x), phi(y))
                   + xi.scale(2 * m.g(x + hx, y))
                   + (x + hx).scale(-2 * structure.eta.apply(y)))
            res = lhs - rhs
            if not res.is_zero():
                out.append(((i, j), res))
    return out


__all__ = [
    "ConnectionTable",
    "CurvatureTables",
    "StructureDerivatives",
    "first_bianchi_residuals",
    "h_direction_phi_derivative_residuals",
    "koszul",
    "metric_compat_residuals",
    "nabla_structure_tensors",
    "reeb_curvature_identity_residuals",
    "riemann",
    "riemann_symmetry_residuals",
    "second_bianchi_residuals",
    "torsion_residuals",
]
