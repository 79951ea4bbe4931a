"""Classifiers built on the curvature tables.

Covers the Sasakian test, exact solving of the nullity condition

    R(X,Y)xi = kappa (eta(Y)X - eta(X)Y) + mu (eta(Y)hX - eta(X)hY)

for the unknowns (kappa, mu), flatness and constant curvature, local
symmetry (nabla R = 0), phi-symmetry (phi^2 applied to nabla R vanishes)
and phi-recurrence (phi^2(nabla R) proportional to R via a 1-form A),
each in a global and a local variant.  "Local" restricts every input
slot to frame fields annihilated by eta; by function-linearity this is
equivalent to testing all fields orthogonal to xi.

Witnesses are reported at the lexicographically smallest violating index
so reports are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .contact import ContactError, ContactStructure, HOperator
from .curvature import CurvatureTables
from .expr import Expr, PoleError
from .frame import OneForm, VectorField

SCOPE_GLOBAL = "global"
SCOPE_LOCAL = "local"

_SAMPLE_SEED = 174
_SAMPLE_COUNT = 25


class ClassifyError(Exception):
    pass


class SelfCheckError(ClassifyError):
    """An internal consistency check failed; indicates an engine bug."""


@dataclass(frozen=True)
class SasakianVerdict:
    ok: bool
    witness: tuple[int, int] | None = None


@dataclass(frozen=True)
class KappaMuVerdict:
    """Solution state of the nullity condition.

    status is "consistent" (unique kappa, mu), "underdetermined" (an
    affine family of solutions; the determined unknowns are filled in,
    a mixed line is reported through `relation`) or "inconsistent"
    (witness carries (i, j, xi-index), witness_component the frame
    component of the first violated equation).
    """

    status: str
    kappa: Expr | None = None
    mu: Expr | None = None
    relation: str | None = None
    witness: tuple | None = None
    witness_component: int | None = None
    constant_flag: bool | None = None
    kappa_le_one: bool | None = None


@dataclass(frozen=True)
class SymmetryVerdict:
    ok: bool
    witness: tuple | None = None   # (w, i, j, k, l), 1-based


@dataclass(frozen=True)
class RecurrenceVerdict:
    status: str                    # recurrent | not_recurrent | trivially_recurrent
    scope: str
    A: OneForm | None = None
    obstruction: str | None = None
    obstruction_index: tuple | None = None


@dataclass(frozen=True)
class ClassificationReport:
    contact_valid: bool | None
    sasakian: SasakianVerdict | None
    kappa_mu: KappaMuVerdict | None
    flat: bool
    constant_curvature: Expr | None
    locally_symmetric: SymmetryVerdict
    phi_symmetric: SymmetryVerdict | None
    locally_phi_symmetric: SymmetryVerdict | None
    phi_recurrent: RecurrenceVerdict | None
    locally_phi_recurrent: RecurrenceVerdict | None
    diagnostics: tuple[str, ...] = ()


def _basis_index(m, v: VectorField) -> int | None:
    for idx in range(1, m.dim + 1):
        if (v - VectorField.basis(m.dim, idx)).is_zero():
            return idx
    return None


def _phi_square(structure: ContactStructure, v: VectorField) -> VectorField:
    return structure.apply_phi(structure.apply_phi(v))


def _scope_indices(structure: ContactStructure, scope: str) -> tuple[int, ...]:
    m = structure.manifold
    if scope == SCOPE_GLOBAL:
        return tuple(range(1, m.dim + 1))
    if scope == SCOPE_LOCAL:
        return tuple(i for i in range(1, m.dim + 1)
                     if structure.eta.components[i - 1].is_zero())
    raise ClassifyError(f"unknown scope {scope!r}")


def is_sasakian(curv: CurvatureTables, structure: ContactStructure) -> SasakianVerdict:
    """Check R(e_i, e_j)xi = eta(e_j)e_i - eta(e_i)e_j for all i, j.

    The scan runs the xi-like slot j in the outer loop so the witness on
    a nullity-shaped failure names the R(e_i, e_j)xi display directly.
    """
    m = curv.manifold
    eta = structure.eta
    for j in range(1, m.dim + 1):
        for i in range(1, m.dim + 1):
            if i == j:
                continue
            lhs = curv.riemann_apply(m.basis(i), m.basis(j), structure.xi)
            rhs = (m.basis(i).scale(eta.components[j - 1])
                   - m.basis(j).scale(eta.components[i - 1]))
            if not (lhs - rhs).is_zero():
                return SasakianVerdict(False, (i, j))
    return SasakianVerdict(True)


class _AffineSolver:
    """Incremental solver for a system a*kappa + b*mu = c over Expr.

    Tracks the solution set exactly: the full plane, a line, a point, or
    empty.  feed() returns False on the equation that empties the set.
    """

    def __init__(self):
        self.state = "plane"
        self.line = None       # (a, b, c)
        self.point = None      # (kappa, mu)
        self.witness = None    # tag of the violated equation

    def feed(self, a: Expr, b: Expr, c: Expr, tag) -> bool:
        if a.is_zero() and b.is_zero():
            if c.is_zero():
                return True
            self.state, self.witness = "empty", tag
            return False
        if self.state == "plane":
            self.state, self.line = "line", (a, b, c)
            return True
        if self.state == "line":
            a1, b1, c1 = self.line
            det = a1 * b - a * b1
            if not det.is_zero():
                kappa = (c1 * b - c * b1) / det
                mu = (a1 * c - a * c1) / det
                self.state, self.point = "point", (kappa, mu)
                return True
            # parallel line: consistent only if it is the same line
            t = a / a1 if not a1.is_zero() else b / b1
            if (a - t * a1).is_zero() and (b - t * b1).is_zero() \
                    and (c - t * c1).is_zero():
                return True
            self.state, self.witness = "empty", tag
            return False
        kappa, mu = self.point
        if (a * kappa + b * mu - c).is_zero():
            return True
        self.state, self.witness = "empty", tag
        return False


def _is_parameter_only(m, e: Expr | None) -> bool:
    if e is None:
        return True
    coords = {s.name for s in m.symbols.coordinates()}
    return not (e.variables() & coords)


def _sample_le_one(e: Expr) -> bool | None:
    """Check e <= 1 at random rational parameter bindings."""
    names = sorted(e.variables())
    rng = random.Random(_SAMPLE_SEED)
    done = 0
    while done < _SAMPLE_COUNT:
        bindings = {n: Fraction(rng.randint(-24, 24), rng.randint(1, 8))
                    for n in names}
        try:
            val = e.eval(bindings)
        except PoleError:
            continue
        if val > 1:
            return False
        done += 1
    return True


def solve_kappa_mu(curv: CurvatureTables, structure: ContactStructure,
                   h: HOperator) -> KappaMuVerdict:
    """Solve the nullity condition for (kappa, mu) exactly.

    One linear equation per pair i < j and frame component; the solution
    set is tracked incrementally, so the first violated equation is the
    inconsistency witness.
    """
    m = curv.manifold
    eta = structure.eta
    xi_idx = _basis_index(m, structure.xi)
    solver = _AffineSolver()
    for i in range(1, m.dim + 1):
        for j in range(i + 1, m.dim + 1):
            lhs = curv.riemann_apply(m.basis(i), m.basis(j), structure.xi)
            a_vec = (m.basis(i).scale(eta.components[j - 1])
                     - m.basis(j).scale(eta.components[i - 1]))
            b_vec = (h.apply(m.basis(i)).scale(eta.components[j - 1])
                     - h.apply(m.basis(j)).scale(eta.components[i - 1]))
            for l in range(1, m.dim + 1):
                tag = (i, j, l)
                if not solver.feed(a_vec.components[l - 1],
                                   b_vec.components[l - 1],
                                   lhs.components[l - 1], tag):
                    i0, j0, l0 = solver.witness
                    return KappaMuVerdict(
                        status="inconsistent",
                        witness=(i0, j0, xi_idx) if xi_idx else (i0, j0),
                        witness_component=l0)
    if solver.state == "point":
        kappa, mu = solver.point
        const = (_is_parameter_only(m, kappa) and _is_parameter_only(m, mu))
        le_one = _sample_le_one(kappa) if const else None
        return KappaMuVerdict(status="consistent", kappa=kappa, mu=mu,
                              constant_flag=const, kappa_le_one=le_one)
    if solver.state == "line":
        a, b, c = solver.line
        kappa = mu = relation = None
        if b.is_zero():
            kappa = c / a
        elif a.is_zero():
            mu = c / b
        else:
            kappa = c / a          # particular solution with mu = 0
            mu = Expr.zero()
            relation = f"({a})*kappa + ({b})*mu = ({c})"
        const = (_is_parameter_only(m, kappa) and _is_parameter_only(m, mu))
        le_one = (_sample_le_one(kappa)
                  if const and kappa is not None else None)
        return KappaMuVerdict(status="underdetermined", kappa=kappa, mu=mu,
                              relation=relation, constant_flag=const,
                              kappa_le_one=le_one)
    # no equation constrained anything
    return KappaMuVerdict(status="underdetermined", constant_flag=True)


def is_flat(curv: CurvatureTables) -> bool:
    return curv.is_flat()


def constant_curvature(curv: CurvatureTables) -> Expr | None:
    """Return c if R(X,Y)Z = c (g(Y,Z)X - g(X,Z)Y) holds, else None."""
    m = curv.manifold
    cand = None
    for i in range(1, m.dim + 1):
        for j in range(1, m.dim + 1):
            for k in range(1, m.dim + 1):
                shape = (m.basis(i).scale(m.metric_entry(j, k))
                         - m.basis(j).scale(m.metric_entry(i, k)))
                actual = curv.riemann(i, j, k)
                for l in range(m.dim):
                    s, a = shape.components[l], actual.components[l]
                    if s.is_zero():
                        if not a.is_zero():
                            return None
                    elif cand is None:
                        cand = a / s
                    elif not (a - cand * s).is_zero():
                        return None
    return cand if cand is not None else Expr.zero()


def is_locally_symmetric(curv: CurvatureTables) -> SymmetryVerdict:
    """nabla R = 0, scanned at i < j (the j > i half is its negative)."""
    m = curv.manifold
    for w in range(1, m.dim + 1):
        for i in range(1, m.dim + 1):
            for j in range(i + 1, m.dim + 1):
                for k in range(1, m.dim + 1):
                    val = curv.nabla_r(w, i, j, k)
                    for l in range(1, m.dim + 1):
                        if not val.components[l - 1].is_zero():
                            return SymmetryVerdict(False, (w, i, j, k, l))
    return SymmetryVerdict(True)


def phi_symmetry(curv: CurvatureTables, structure: ContactStructure,
                 scope: str) -> SymmetryVerdict:
    """phi^2((nabla_{e_w} R)(e_i, e_j) e_k) = 0 over the scope indices."""
    idxs = _scope_indices(structure, scope)
    m = curv.manifold
    for w in idxs:
        for i in idxs:
            for j in idxs:
                if j <= i:
                    continue
                for k in idxs:
                    val = _phi_square(structure, curv.nabla_r(w, i, j, k))
                    for l in range(1, m.dim + 1):
                        if not val.components[l - 1].is_zero():
                            return SymmetryVerdict(False, (w, i, j, k, l))
    return SymmetryVerdict(True)


def solve_phi_recurrence(curv: CurvatureTables, structure: ContactStructure,
                         scope: str) -> RecurrenceVerdict:
    """Solve phi^2((nabla_{e_w} R)(e_i,e_j)e_k) = A(e_w) R(e_i,e_j)e_k.

    The curvature coefficients do not depend on w, so either every
    direction determines its A component by an exact ratio, or no
    direction does and the relation is vacuous.  A must have a nonzero
    in-scope component to count as recurrent.
    """
    idxs = _scope_indices(structure, scope)
    m = curv.manifold

    def equations():
        for i in idxs:
            for j in idxs:
                if j <= i:
                    continue
                for k in idxs:
                    rhs = curv.riemann(i, j, k)
                    for l in range(1, m.dim + 1):
                        yield i, j, k, l, rhs.components[l - 1]

    curvature_seen = any(not rhs.is_zero() for *_, rhs in equations())
    components: dict[int, Expr] = {}
    for w in idxs:
        a_w = None
        for i, j, k, l, rhs in equations():
            lhs = _phi_square(structure,
                              curv.nabla_r(w, i, j, k)).components[l - 1]
            if rhs.is_zero():
                if not lhs.is_zero():
                    index = (w, i, j, k, l)
                    return RecurrenceVerdict(
                        status="not_recurrent", scope=scope,
                        obstruction=(f"component {index}: lhs {lhs}, "
                                     f"curvature coefficient 0"),
                        obstruction_index=index)
            elif a_w is None:
                a_w = lhs / rhs
            elif not (lhs - a_w * rhs).is_zero():
                index = (w, i, j, k, l)
                return RecurrenceVerdict(
                    status="not_recurrent", scope=scope,
                    obstruction=(f"component {index}: lhs {lhs}, "
                                 f"curvature coefficient {rhs}"),
                    obstruction_index=index)
        if a_w is not None:
            components[w] = a_w
    if not curvature_seen:
        # both sides vanish identically: any nonzero A works
        return RecurrenceVerdict(status="trivially_recurrent", scope=scope,
                                 A=OneForm(structure.eta.components))
    comps = tuple(components.get(idx, Expr.zero())
                  for idx in range(1, m.dim + 1))
    if all(c.is_zero() for c in comps):
        return RecurrenceVerdict(status="not_recurrent", scope=scope,
                                 obstruction="only A=0")
    return RecurrenceVerdict(status="recurrent", scope=scope,
                             A=OneForm(comps))


def check_3d_decomposition(curv: CurvatureTables, ricci_override=None) -> bool:
    """Verify the dimension-3 curvature reconstruction

        R(X,Y)Z = g(Y,Z)QX - g(X,Z)QY + S(Y,Z)X - S(X,Z)Y
                  + (r/2)(g(X,Z)Y - g(Y,Z)X)

    componentwise.  ricci_override substitutes a Ricci matrix (Q and r
    are recomputed from it), which gives the tests a corruption knob.
    """
    m = curv.manifold
    if m.dim != 3:
        raise ClassifyError("the curvature reconstruction check needs dim 3")
    if ricci_override is None:
        ricci = curv.ricci
        q_rows = curv.ricci_operator
        scalar = curv.scalar
    else:
        ricci = ricci_override
        ginv = m.metric_inverse()
        q_rows = []
        for i in range(3):
            comps = []
            for j in range(3):
                acc = Expr.zero()
                for k in range(3):
                    acc = acc + ricci[i][k] * ginv[k][j]
                comps.append(acc)
            q_rows.append(VectorField(tuple(comps)))
        scalar = Expr.zero()
        for i in range(3):
            scalar = scalar + q_rows[i].components[i]
    half_r = Expr.rational(1, 2) * scalar
    for i in range(1, 4):
        for j in range(1, 4):
            for k in range(1, 4):
                gjk = m.metric_entry(j, k)
                gik = m.metric_entry(i, k)
                recon = (q_rows[i - 1].scale(gjk) - q_rows[j - 1].scale(gik)
                         + m.basis(i).scale(ricci[j - 1][k - 1])
                         - m.basis(j).scale(ricci[i - 1][k - 1])
                         + (m.basis(j).scale(gik)
                            - m.basis(i).scale(gjk)).scale(half_r))
                if not (curv.riemann(i, j, k) - recon).is_zero():
                    return False
    return True


def _check_implication_chain(report: ClassificationReport) -> None:
    chain = [("flat", report.flat),
             ("locally symmetric", report.locally_symmetric.ok)]
    if report.phi_symmetric is not None:
        chain.append(("phi-symmetric", report.phi_symmetric.ok))
    if report.locally_phi_symmetric is not None:
        chain.append(("locally phi-symmetric", report.locally_phi_symmetric.ok))
    for (name_a, val_a), (name_b, val_b) in zip(chain, chain[1:]):
        if val_a and not val_b:
            raise SelfCheckError(
                f"implication chain violated: {name_a} holds "
                f"but {name_b} does not")


def classify_structure(curv: CurvatureTables,
                       structure: ContactStructure | None = None
                       ) -> ClassificationReport:
    """Run every classifier and enforce the implication chain.

    Without a contact structure the phi/eta-dependent classifiers are
    skipped and reported as None with a diagnostic.
    """
    diagnostics: list[str] = []
    flat = is_flat(curv)
    const = constant_curvature(curv)
    loc_sym = is_locally_symmetric(curv)
    contact_valid = sasakian = kappa_mu = None
    phi_sym = loc_phi_sym = phi_rec = loc_phi_rec = None
    if structure is None:
        diagnostics.append(
            "no contact structure attached; structure classifiers skipped")
    else:
        ac = structure.validate_almost_contact()
        cm = structure.check_contact_metric()
        contact_valid = not ac and cm.ok
        if ac:
            diagnostics.append(
                "almost contact axioms violated: " + ac[0].describe())
        elif not cm.ok:
            diagnostics.append(
                "contact metric condition violated: "
                + cm.violations[0].describe())
        sasakian = is_sasakian(curv, structure)
        try:
            kappa_mu = solve_kappa_mu(curv, structure, structure.compute_h())
        except ContactError as exc:
            # a manifest can carry a phi whose h breaks the invariants
            kappa_mu = None
            diagnostics.append(f"nullity solver skipped: {exc}")
        if (kappa_mu is not None and kappa_mu.status == "consistent"
                and not kappa_mu.constant_flag):
            diagnostics.append("nullity condition solved with non-constant "
                               "coefficients; not a (kappa,mu) structure")
        if kappa_mu is not None and kappa_mu.kappa_le_one is False:
            diagnostics.append("sampled kappa > 1; nullity solution is "
                               "outside the admissible range")
        phi_sym = phi_symmetry(curv, structure, SCOPE_GLOBAL)
        loc_phi_sym = phi_symmetry(curv, structure, SCOPE_LOCAL)
        phi_rec = solve_phi_recurrence(curv, structure, SCOPE_GLOBAL)
        loc_phi_rec = solve_phi_recurrence(curv, structure, SCOPE_LOCAL)
    report = ClassificationReport(
        contact_valid=contact_valid,
        sasakian=sasakian,
        kappa_mu=kappa_mu,
        flat=flat,
        constant_curvature=const,
        locally_symmetric=loc_sym,
        phi_symmetric=phi_sym,
        locally_phi_symmetric=loc_phi_sym,
        phi_recurrent=phi_rec,
        locally_phi_recurrent=loc_phi_rec,
        diagnostics=tuple(diagnostics))
    _check_implication_chain(report)
    return report


__all__ = [
    "SCOPE_GLOBAL",
    "SCOPE_LOCAL",
    "ClassificationReport",
    "ClassifyError",
    "KappaMuVerdict",
    "RecurrenceVerdict",
    "SasakianVerdict",
    "SelfCheckError",
    "SymmetryVerdict",
    "check_3d_decomposition",
    "classify_structure",
    "constant_curvature",
    "is_flat",
    "is_locally_symmetric",
    "is_sasakian",
    "phi_symmetry",
    "solve_kappa_mu",
    "solve_phi_recurrence",
]
