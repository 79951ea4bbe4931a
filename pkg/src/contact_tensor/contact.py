"""Almost contact metric structures on a framed manifold.

The structure is a triple (phi, xi, eta): an endomorphism phi of the frame
bundle, the Reeb field xi, and the dual form eta, with eta derived from xi
through the metric rather than declared separately.  Validation collects
every axiom violation instead of stopping at the first, so a report can show
the whole failure surface of a bad manifest.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expr import Expr
from .frame import FrameManifold, OneForm, VectorField, _make_substituter


class ContactError(Exception):
    """Raised for structurally unusable contact data."""


@dataclass(frozen=True)
class Violation:
    """One failed axiom instance: which law, at which frame indices."""

    law: str
    indices: tuple[int, ...]
    lhs: object
    rhs: object

    def describe(self) -> str:
        where = ",".join(str(i) for i in self.indices)
        return f"{self.law} fails at ({where}): {self.lhs} != {self.rhs}"


@dataclass(frozen=True)
class ContactMetricReport:
    ok: bool
    violations: tuple[Violation, ...]


@dataclass(frozen=True)
class HOperator:
    """The tensor h = (1/2) Lie_xi phi, stored as frame images."""

    rows: tuple[VectorField, ...]

    def apply(self, x: VectorField) -> VectorField:
        dim = len(self.rows)
        out = VectorField.zero(dim)
        for i in range(dim):
            c = x.components[i]
            if not c.is_zero():
                out = out + self.rows[i].scale(c)
        return out

    def matrix(self):
        return tuple(row.components for row in self.rows)

    def is_zero(self) -> bool:
        return all(row.is_zero() for row in self.rows)


@dataclass(frozen=True)
class HEigenstructure:
    """Eigenvalue lambda and the frame partition D(lambda), D(-lambda), D(0)."""

    lam: Expr
    d_plus: tuple[int, ...]
    d_minus: tuple[int, ...]
    d_zero: tuple[int, ...]


class ContactStructure:
    """phi, xi and the metric-dual eta over a frame manifold.

    phi is supplied as frame images: phi_rows[i] = phi(e_(i+1)).  eta is
    computed as eta(e_i) = g(e_i, xi), never taken from input.
    """

    def __init__(self, manifold: FrameManifold, phi_rows, xi: VectorField):
        dim = manifold.dim
        rows = tuple(phi_rows)
        if len(rows) != dim or any(len(r.components) != dim for r in rows):
            raise ContactError(f"phi needs {dim} frame images of length {dim}")
        if len(xi.components) != dim:
            raise ContactError(f"xi needs {dim} components")
        self.manifold = manifold
        self.phi_rows = rows
        self.xi = xi
        self.eta = OneForm(tuple(
            manifold.g(manifold.basis(i), xi) for i in range(1, dim + 1)))

    def apply_phi(self, x: VectorField) -> VectorField:
        out = VectorField.zero(self.manifold.dim)
        for i in range(self.manifold.dim):
            c = x.components[i]
            if not c.is_zero():
                out = out + self.phi_rows[i].scale(c)
        return out

    def substitute_parameters(self, bindings: dict) -> "ContactStructure":
        """Same structure over the parameter-substituted manifold."""
        sub = _make_substituter(self.manifold.symbols, bindings)
        manifold = self.manifold.substitute_parameters(bindings)
        rows = tuple(VectorField(tuple(sub(c) for c in r.components))
                     for r in self.phi_rows)
        xi = VectorField(tuple(sub(c) for c in self.xi.components))
        return ContactStructure(manifold, rows, xi)

    # -- axioms -------------------------------------------------------------

    def validate_almost_contact(self) -> list[Violation]:
        """All almost contact metric axiom violations, exhaustively.

        Checked on frame fields: eta(xi) = 1, phi^2 = -id + eta (x) xi,
        phi(xi) = 0, eta o phi = 0, and the compatibility
        g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y).
        """
        m = self.manifold
        dim = m.dim
        out: list[Violation] = []
        trace = self.eta.apply(self.xi)
        if trace != Expr.one():
            out.append(Violation("eta(xi) = 1", (), str(trace), "1"))
        phi_xi = self.apply_phi(self.xi)
        if not phi_xi.is_zero():
            out.append(Violation("phi(xi) = 0", (),
                                 [str(c) for c in phi_xi.components], "0"))
        for i in range(1, dim + 1):
            ei = m.basis(i)
            lhs = self.apply_phi(self.apply_phi(ei))
            rhs = -ei + self.xi.scale(self.eta.components[i - 1])
            if not (lhs - rhs).is_zero():
                out.append(Violation("phi^2 = -id + eta(x)xi", (i,),
                                     [str(c) for c in lhs.components],
                                     [str(c) for c in rhs.components]))
            val = self.eta.apply(self.phi_rows[i - 1])
            if not val.is_zero():
                out.append(Violation("eta o phi = 0", (i,), str(val), "0"))
        for i in range(1, dim + 1):
            for j in range(i, dim + 1):
                ei, ej = m.basis(i), m.basis(j)
                lhs = m.g(self.apply_phi(ei), self.apply_phi(ej))
                rhs = (m.g(ei, ej)
                       - self.eta.components[i - 1] * self.eta.components[j - 1])
                if lhs != rhs:
                    out.append(Violation(
                        "g(phi X, phi Y) = g(X, Y) - eta(X)eta(Y)",
                        (i, j), str(lhs), str(rhs)))
        return out

    def d_eta(self, i: int, j: int) -> Expr:
        """d eta on a frame pair, with the 1/2 convention:
        d eta(X, Y) = (1/2)(X(eta Y) - Y(eta X) - eta([X, Y]))."""
        m = self.manifold
        x_term = m.directional_derivative(i, self.eta.components[j - 1])
        y_term = m.directional_derivative(j, self.eta.components[i - 1])
        br = self.eta.apply(m.bracket_basis(i, j))
        return (x_term - y_term - br) / 2

    def check_contact_metric(self) -> ContactMetricReport:
        """Contact metric condition d eta(X, Y) = g(X, phi Y) on all pairs."""
        m = self.manifold
        out = []
        for i in range(1, m.dim + 1):
            for j in range(i + 1, m.dim + 1):
                lhs = self.d_eta(i, j)
                rhs = m.g(m.basis(i), self.phi_rows[j - 1])
                if lhs != rhs:
                    out.append(Violation("d eta(X,Y) = g(X, phi Y)", (i, j),
                                         str(lhs), str(rhs)))
        return ContactMetricReport(not out, tuple(out))

    # -- the h operator -----------------------------------------------------

    def compute_h(self) -> HOperator:
        """h X = (1/2)([xi, phi X] - phi [xi, X]) on the frame fields.

        The defining invariants h(xi) = 0, h phi = -phi h, tr h = 0 and
        self-adjointness are verified; a failure means the input structure
        is not a contact metric structure and raises ContactError.
        """
        m = self.manifold
        dim = m.dim
        rows = []
        for i in range(1, dim + 1):
            ei = m.basis(i)
            lie = m.bracket(self.xi, self.apply_phi(ei))
            lie = lie - self.apply_phi(m.bracket(self.xi, ei))
            rows.append(lie.scale(Expr.rational(1, 2)))
        h = HOperator(tuple(rows))
        problems = []
        if not h.apply(self.xi).is_zero():
            problems.append("h(xi) != 0")
        for i in range(1, dim + 1):
            ei = m.basis(i)
            anti = h.apply(self.apply_phi(ei)) + self.apply_phi(h.apply(ei))
            if not anti.is_zero():
                problems.append(f"(h phi + phi h)(e{i}) != 0")
        tr = Expr.zero()
        for i in range(dim):
            tr = tr + rows[i].components[i]
        if not tr.is_zero():
            problems.append(f"tr h = {tr} != 0")
        for i in range(1, dim + 1):
            for j in range(i + 1, dim + 1):
                ei, ej = m.basis(i), m.basis(j)
                if m.g(h.apply(ei), ej) != m.g(ei, h.apply(ej)):
                    problems.append(f"h is not self-adjoint at (e{i},e{j})")
        if problems:
            raise ContactError("h operator invariants fail, the structure "
                               "is not contact metric: " + "; ".join(problems))
        return h


def h_eigenstructure(h: HOperator) -> HEigenstructure:
    """Eigenvalue partition of a frame-diagonal h.

    The frame must already diagonalize h; otherwise the caller has to
    re-express the frame in an h-eigenbasis first and this raises.  The
    representative lambda is the eigenvalue whose canonical leading
    coefficient is positive, so numeric frames yield the positive root and
    a symbolic lambda is preferred over -lambda.
    """
    dim = len(h.rows)
    for i in range(dim):
        for j in range(dim):
            if i != j and not h.rows[i].components[j].is_zero():
                raise ContactError(
                    "h is not diagonal in this frame; re-express the frame "
                    "in an h-eigenbasis before asking for the eigenstructure")
    diag = [h.rows[i].components[i] for i in range(dim)]
    values = [d for d in diag if not d.is_zero()]
    if not values:
        return HEigenstructure(Expr.zero(), (), (),
                               tuple(range(1, dim + 1)))
    lam = None
    for d in values:
        if d.num.leading()[1] > 0:
            lam = d
            break
    if lam is None:
        lam = -values[0]
    plus, minus, zero = [], [], []
    for i, d in enumerate(diag, start=1):
        if d.is_zero():
            zero.append(i)
        elif d == lam:
            plus.append(i)
        elif d == -lam:
            minus.append(i)
        else:
            raise ContactError(
                f"h eigenvalue {d} is neither +-{lam} nor 0; the frame does "
                "not split into D(lambda), D(-lambda), D(0)")
    return HEigenstructure(lam, tuple(plus), tuple(minus), tuple(zero))


__all__ = [
    "ContactError",
    "ContactMetricReport",
    "ContactStructure",
    "HEigenstructure",
    "HOperator",
    "Violation",
    "h_eigenstructure",
]
