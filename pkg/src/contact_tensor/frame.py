"""Frame-defined manifolds.

A manifold here is an open set carrying a global frame e_1..e_n, described
either abstractly by structure constants [e_i, e_j] = sum_k C^k_ij e_k with
parameter-only coefficients, or concretely by a chart in which each frame
field expands over the coordinate partials.  All tensor data downstream is
expressed in this frame; coordinate components never leave this module.

Frame indices are 1-based in every public argument, witness, and report,
matching the e1..en labels used in rendered output.  Instances are immutable
after construction; lazily derived tables are cached write-once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .expr import Expr, ExprError, KIND_COORDINATE, Symbol, SymbolTable
from .linalg import determinant, invert

MODE_ABSTRACT = "abstract"
MODE_CHART = "chart"


class FrameError(Exception):
    """Raised for ill-formed frame data or unsupported frame operations."""


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Expr.rational(value)
    raise FrameError(f"expected an expression, got {value!r}")


@dataclass(frozen=True)
class VectorField:
    """A vector field given by its frame components."""

    components: tuple[Expr, ...]

    @staticmethod
    def make(components) -> "VectorField":
        return VectorField(tuple(as_expr(c) for c in components))

    @staticmethod
    def zero(dim: int) -> "VectorField":
        return VectorField(tuple(Expr.zero() for _ in range(dim)))

    @staticmethod
    def basis(dim: int, i: int) -> "VectorField":
        # i is 1-based
        return VectorField(tuple(Expr.one() if k == i - 1 else Expr.zero()
                                 for k in range(dim)))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a + b for a, b in
                                 zip(self.components, other.components)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a - b for a, b in
                                 zip(self.components, other.components)))

    def __neg__(self) -> "VectorField":
        return VectorField(tuple(-a for a in self.components))

    def scale(self, c) -> "VectorField":
        c = as_expr(c)
        return VectorField(tuple(c * a for a in self.components))


@dataclass(frozen=True)
class OneForm:
    """A one-form given by its values on the frame fields."""

    components: tuple[Expr, ...]

    @staticmethod
    def make(components) -> "OneForm":
        return OneForm(tuple(as_expr(c) for c in components))

    def apply(self, x: VectorField) -> Expr:
        total = Expr.zero()
        for a, b in zip(self.components, x.components):
            total = total + a * b
        return total

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)


@dataclass(frozen=True)
class JacobiViolation:
    triple: tuple[int, int, int]
    residual: VectorField


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    violations: tuple[JacobiViolation, ...]


class FrameManifold:
    """Frame presentation of a manifold, abstract or chart realized.

    Build through the `abstract` or `chart` classmethods.  The metric is
    given on frame pairs and must be parameter-only (constant along the
    manifold); it defaults to the identity, the orthonormal-frame case.
    """

    def __init__(self, mode, dim, symbols, metric, structure, chart_frame):
        if dim < 3 or dim % 2 == 0:
            raise FrameError(f"dimension must be an odd integer >= 3, got {dim}")
        self.mode = mode
        self.dim = dim
        self.symbols = symbols
        self.metric = metric
        self._structure = structure
        self.chart_frame = chart_frame
        self._coordinate_names = frozenset(
            s.name for s in symbols.coordinates())
        self._metric_inverse = None
        self._chart_inverse = None
        self._chart_brackets = None

    # -- construction -------------------------------------------------------

    @classmethod
    def abstract(cls, dim: int, symbols: SymbolTable, brackets: dict,
                 metric=None) -> "FrameManifold":
        """Abstract mode: brackets maps 1-based pairs (i, j) with i < j to
        component sequences of [e_i, e_j]; omitted pairs are zero."""
        structure: dict[tuple[int, int], VectorField] = {}
        for (i, j), comps in brackets.items():
            if not (1 <= i < j <= dim):
                raise FrameError(f"bracket pair ({i}, {j}) must satisfy "
                                 f"1 <= i < j <= {dim}")
            vf = _as_vector(comps, dim)
            for c in vf.components:
                _require_parameter_only(c, symbols,
                                        f"structure constant of [e{i},e{j}]")
            structure[(i, j)] = vf
        metric = _check_metric(metric, dim, symbols)
        return cls(MODE_ABSTRACT, dim, symbols, metric, structure, None)

    @classmethod
    def chart(cls, dim: int, symbols: SymbolTable, frame,
              metric=None) -> "FrameManifold":
        """Chart mode: frame[i][a] is the coefficient of the a-th coordinate
        partial in e_(i+1); coordinates are the coordinate-kind symbols in
        declaration order and there must be exactly dim of them."""
        coords = symbols.coordinates()
        if len(coords) != dim:
            raise FrameError(f"chart mode needs exactly {dim} coordinate "
                             f"symbols, got {len(coords)}")
        rows = tuple(_as_vector(row, dim) for row in frame)
        if len(rows) != dim:
            raise FrameError(f"chart frame must have {dim} rows")
        metric = _check_metric(metric, dim, symbols)
        return cls(MODE_CHART, dim, symbols, metric, None, rows)

    # -- basic queries -------------------------------------------------------

    def coordinates(self) -> tuple[Symbol, ...]:
        return self.symbols.coordinates()

    def basis(self, i: int) -> VectorField:
        return VectorField.basis(self.dim, i)

    def metric_entry(self, i: int, j: int) -> Expr:
        return self.metric[i - 1][j - 1]

    def metric_inverse(self):
        if self._metric_inverse is None:
            inv = invert([list(row) for row in self.metric], "metric")
            self._metric_inverse = tuple(tuple(row) for row in inv)
        return self._metric_inverse

    def g(self, x: VectorField, y: VectorField) -> Expr:
        total = Expr.zero()
        for i in range(self.dim):
            xi = x.components[i]
            if xi.is_zero():
                continue
            for j in range(self.dim):
                total = total + self.metric[i][j] * xi * y.components[j]
        return total

    # -- differentiation and brackets ---------------------------------------

    def directional_derivative(self, i: int, f: Expr) -> Expr:
        """e_i applied to a scalar.  In abstract mode only parameter-only
        scalars are differentiable (to zero); a coordinate-dependent scalar
        is an error there."""
        f = as_expr(f)
        if self.mode == MODE_ABSTRACT:
            bad = f.variables() & self._coordinate_names
            if bad:
                raise FrameError(
                    f"coordinate-dependent scalar {f} cannot be "
                    "differentiated in abstract mode")
            return Expr.zero()
        row = self.chart_frame[i - 1]
        total = Expr.zero()
        for a, coord in enumerate(self.coordinates()):
            fa = row.components[a]
            if fa.is_zero():
                continue
            total = total + fa * f.diff(coord)
        return total

    def chart_inverse(self):
        """Inverse of the chart coefficient matrix (rows = frame fields)."""
        if self.mode != MODE_CHART:
            raise FrameError("chart_inverse is defined in chart mode only")
        if self._chart_inverse is None:
            mat = [list(row.components) for row in self.chart_frame]
            self._chart_inverse = invert(mat, "chart frame matrix")
        return self._chart_inverse

    def brackets_from_chart(self) -> dict:
        """All frame brackets re-expressed in the frame, computed from the
        chart by differentiating the coefficient rows.  Chart mode only."""
        if self.mode != MODE_CHART:
            raise FrameError("brackets_from_chart requires chart mode")
        if self._chart_brackets is None:
            coords = self.coordinates()
            finv = self.chart_inverse()
            table: dict[tuple[int, int], VectorField] = {}
            for i in range(1, self.dim + 1):
                for j in range(i + 1, self.dim + 1):
                    # coordinate components of [e_i, e_j]
                    v = []
                    for a in range(self.dim):
                        fa = self.directional_derivative(
                            i, self.chart_frame[j - 1].components[a])
                        fb = self.directional_derivative(
                            j, self.chart_frame[i - 1].components[a])
                        v.append(fa - fb)
                    comps = [Expr.zero()] * self.dim
                    for k in range(self.dim):
                        acc = Expr.zero()
                        for a in range(self.dim):
                            acc = acc + v[a] * finv[a][k]
                        comps[k] = acc
                    table[(i, j)] = VectorField(tuple(comps))
            self._chart_brackets = table
        return self._chart_brackets

    def bracket_basis(self, i: int, j: int) -> VectorField:
        """[e_i, e_j] as a frame vector field (antisymmetric in i, j)."""
        if i == j:
            return VectorField.zero(self.dim)
        table = (self._structure if self.mode == MODE_ABSTRACT
                 else self.brackets_from_chart())
        if i < j:
            return table.get((i, j), VectorField.zero(self.dim))
        return -table.get((j, i), VectorField.zero(self.dim))

    def bracket(self, x: VectorField, y: VectorField) -> VectorField:
        """Lie bracket of two frame vector fields, with the Leibniz terms
        from non-constant components."""
        out = [Expr.zero()] * self.dim
        for k in range(self.dim):
            acc = Expr.zero()
            for i in range(1, self.dim + 1):
                xi = x.components[i - 1]
                if not xi.is_zero():
                    acc = acc + xi * self.directional_derivative(
                        i, y.components[k])
                yi = y.components[i - 1]
                if not yi.is_zero():
                    acc = acc - yi * self.directional_derivative(
                        i, x.components[k])
            out[k] = acc
        total = VectorField(tuple(out))
        for i in range(1, self.dim + 1):
            xi = x.components[i - 1]
            if xi.is_zero():
                continue
            for j in range(1, self.dim + 1):
                yj = y.components[j - 1]
                if yj.is_zero() or i == j:
                    continue
                total = total + self.bracket_basis(i, j).scale(xi * yj)
        return total

    def check_jacobi(self) -> JacobiReport:
        """Cyclic-sum test on all basis triples, derivative terms included."""
        violations = []
        for i in range(1, self.dim + 1):
            for j in range(i + 1, self.dim + 1):
                for k in range(j + 1, self.dim + 1):
                    ei, ej, ek = self.basis(i), self.basis(j), self.basis(k)
                    residual = (self.bracket(ei, self.bracket(ej, ek))
                                + self.bracket(ej, self.bracket(ek, ei))
                                + self.bracket(ek, self.bracket(ei, ej)))
                    if not residual.is_zero():
                        violations.append(JacobiViolation((i, j, k), residual))
        return JacobiReport(not violations, tuple(violations))

    # -- validation and substitution ----------------------------------------

    def validate(self) -> list[str]:
        """Exhaustive structural validation; returns human-readable issues."""
        issues = []
        if determinant([list(row) for row in self.metric]).is_zero():
            issues.append("metric is singular")
        if self.mode == MODE_CHART:
            mat = [list(row.components) for row in self.chart_frame]
            if determinant(mat).is_zero():
                issues.append("chart frame matrix is singular: the frame "
                              "fields are linearly dependent")
                # brackets need the inverse frame, so Jacobi is unreachable
                return issues
        jac = self.check_jacobi()
        if not jac.ok:
            triples = ", ".join(str(v.triple) for v in jac.violations)
            issues.append(f"Jacobi identity fails on triples {triples}")
        return issues

    def substitute_parameters(self, bindings: dict) -> "FrameManifold":
        """New manifold with parameter symbols replaced by rationals."""
        sub = _make_substituter(self.symbols, bindings)
        metric = tuple(tuple(sub(e) for e in row) for row in self.metric)
        if self.mode == MODE_ABSTRACT:
            structure = {pair: VectorField(tuple(sub(c) for c in vf.components))
                         for pair, vf in self._structure.items()}
            return FrameManifold(self.mode, self.dim, self.symbols, metric,
                                 structure, None)
        frame = tuple(VectorField(tuple(sub(c) for c in row.components))
                      for row in self.chart_frame)
        return FrameManifold(self.mode, self.dim, self.symbols, metric,
                             None, frame)


def _as_vector(components, dim: int) -> VectorField:
    vf = VectorField.make(components)
    if len(vf.components) != dim:
        raise FrameError(f"expected {dim} components, got "
                         f"{len(vf.components)}")
    return vf


def _require_parameter_only(e: Expr, symbols: SymbolTable, what: str):
    coords = {s.name for s in symbols.coordinates()}
    bad = e.variables() & coords
    if bad:
        raise FrameError(f"{what} must be parameter-only, found "
                         f"coordinate {sorted(bad)[0]!r} in {e}")


def _check_metric(metric, dim: int, symbols: SymbolTable):
    if metric is None:
        return tuple(tuple(Expr.one() if i == j else Expr.zero()
                           for j in range(dim)) for i in range(dim))
    rows = tuple(tuple(as_expr(e) for e in row) for row in metric)
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise FrameError(f"metric must be a {dim}x{dim} matrix")
    for i in range(dim):
        for j in range(dim):
            _require_parameter_only(rows[i][j], symbols, f"metric entry "
                                    f"g(e{i + 1},e{j + 1})")
            if rows[i][j] != rows[j][i]:
                raise FrameError("metric is not symmetric at "
                                 f"(e{i + 1},e{j + 1})")
    return rows


def _make_substituter(symbols: SymbolTable, bindings: dict):
    pairs = []
    for key, value in bindings.items():
        name = key.name if isinstance(key, Symbol) else str(key)
        sym = symbols.get(name)
        if sym.kind == KIND_COORDINATE:
            raise FrameError(f"cannot bind coordinate {name!r}; only "
                             "parameters are substitutable")
        pairs.append((sym, Expr.rational(Fraction(value))))

    def sub(e: Expr) -> Expr:
        for sym, val in pairs:
            e = e.substitute(sym, val)
        return e

    return sub


__all__ = [
    "MODE_ABSTRACT",
    "MODE_CHART",
    "FrameError",
    "FrameManifold",
    "JacobiReport",
    "JacobiViolation",
    "OneForm",
    "VectorField",
    "as_expr",
]
