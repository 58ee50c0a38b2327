"""Poisson structures, symplectic forms and the operations they induce.

Sign conventions (fixed here once; every identity in the package and the
test suite is stated relative to these):

* bracket:        {f, g} := pi(df, dg)
* musical sharp:  pi#(alpha) := pi(alpha, .), i.e. <beta, pi#(alpha)> = pi(alpha, beta)
* Hamiltonian:    X_f := pi#(df), so X_f(g) = {f, g}
* Koszul bracket: [alpha, beta]_pi := L_{pi#alpha} beta - L_{pi#beta} alpha - d(pi(alpha, beta)),
                  which satisfies [df, dg]_pi = d{f, g}
* flat map:       omega_flat(X) := i_X omega

With these choices, a symplectic form and its inverse bivector (component
matrices exact mutual inverses) satisfy pi# . omega_flat = id, and for the
canonical form dq^dp the induced bracket is {q, p} = -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _linalg
from .chart import (
    Chart,
    DifferentialForm,
    Multivector,
    exterior_derivative,
    jacobi_check,
    lie_derivative,
)
from .errors import ChartMismatchError, DegreeError, NotPoissonError
from .poly import Polynomial


def full_matrix(bivector: Multivector) -> list[list[Polynomial]]:
    """Antisymmetric n-by-n component matrix P with P[i][j] = pi^(ij)."""
    if bivector.degree != 2:
        raise DegreeError("component matrix takes a bivector")
    chart = bivector.chart
    n = chart.dim
    mat = [[chart.zero_poly() for _ in range(n)] for _ in range(n)]
    for (i, j), poly in bivector.components.items():
        mat[i][j] = poly
        mat[j][i] = -poly
    return mat


def form_matrix(two_form: DifferentialForm) -> list[list[Polynomial]]:
    """Antisymmetric component matrix W with W[i][j] = omega_(ij)."""
    if two_form.degree != 2:
        raise DegreeError("component matrix takes a 2-form")
    chart = two_form.chart
    n = chart.dim
    mat = [[chart.zero_poly() for _ in range(n)] for _ in range(n)]
    for (i, j), poly in two_form.components.items():
        mat[i][j] = poly
        mat[j][i] = -poly
    return mat


@dataclass(frozen=True)
class PoissonStructure:
    """A bivector field together with an exact Jacobi verdict.

    ``jacobi_verified`` can only be True when [pi, pi] = 0 holds exactly;
    the constructor re-checks the claim, so the flag cannot lie.  Bivectors
    failing the identity can still be carried around (flag False) for
    negative tests, but operations that need a Poisson structure refuse
    them."""

    bivector: Multivector
    jacobi_verified: bool

    def __post_init__(self):
        if self.bivector.degree != 2:
            raise DegreeError("a Poisson structure is a degree-2 multivector")
        if self.jacobi_verified and not jacobi_check(self.bivector).is_zero():
            raise NotPoissonError("jacobi_verified claimed but [pi, pi] != 0")

    @classmethod
    def from_bivector(cls, bivector: Multivector) -> "PoissonStructure":
        return cls(bivector, jacobi_check(bivector).is_zero())

    @property
    def chart(self) -> Chart:
        return self.bivector.chart


def _as_bivector(pi) -> Multivector:
    return pi.bivector if isinstance(pi, PoissonStructure) else pi


def sharp(pi, alpha: DifferentialForm) -> Multivector:
    """pi#(alpha) = pi(alpha, .) mapped into vector fields."""
    bivector = _as_bivector(pi)
    if alpha.degree != 1:
        raise DegreeError("sharp takes a 1-form")
    if bivector.chart != alpha.chart:
        raise ChartMismatchError("sharp: operands on different charts")
    chart = bivector.chart
    mat = full_matrix(bivector)
    comps = {}
    for j in range(chart.dim):
        out = chart.zero_poly()
        for (i,), a_i in alpha.components.items():
            out = out + a_i * mat[i][j]
        if not out.is_zero():
            comps[(j,)] = out
    return Multivector(chart, 1, comps)


def pairing(alpha: DifferentialForm, field: Multivector) -> Polynomial:
    """<alpha, X> for a 1-form and a vector field."""
    if alpha.degree != 1 or field.degree != 1:
        raise DegreeError("pairing takes a 1-form and a vector field")
    if alpha.chart != field.chart:
        raise ChartMismatchError("pairing: operands on different charts")
    out = alpha.chart.zero_poly()
    for (i,), a_i in alpha.components.items():
        out = out + a_i * field.component((i,))
    return out


def bivector_pairing(pi, alpha: DifferentialForm, beta: DifferentialForm) -> Polynomial:
    """pi(alpha, beta) = <beta, pi#(alpha)>."""
    return pairing(beta, sharp(pi, alpha))


def poisson_bracket(pi, f: Polynomial, g: Polynomial) -> Polynomial:
    """{f, g} = pi(df, dg)."""
    bivector = _as_bivector(pi)
    chart = bivector.chart
    f = f.with_variables(chart.coords)
    g = g.with_variables(chart.coords)
    out = chart.zero_poly()
    for (i, j), p in bivector.components.items():
        ci, cj = chart.coords[i], chart.coords[j]
        out = out + p * (f.derivative(ci) * g.derivative(cj) - f.derivative(cj) * g.derivative(ci))
    return out


def differential(chart: Chart, f: Polynomial) -> DifferentialForm:
    """df as a 1-form on the chart."""
    return exterior_derivative(DifferentialForm.from_poly(chart, f))


def hamiltonian_vf(pi, f: Polynomial) -> Multivector:
    """X_f = pi#(df)."""
    chart = _as_bivector(pi).chart
    return sharp(pi, differential(chart, f))


def koszul_bracket(pi, alpha: DifferentialForm, beta: DifferentialForm) -> DifferentialForm:
    """Bracket on 1-forms induced by pi; satisfies [df, dg]_pi = d{f, g}."""
    if alpha.degree != 1 or beta.degree != 1:
        raise DegreeError("Koszul bracket takes 1-forms")
    chart = _as_bivector(pi).chart
    first = lie_derivative(sharp(pi, alpha), beta)
    second = lie_derivative(sharp(pi, beta), alpha)
    exact = differential(chart, bivector_pairing(pi, alpha, beta))
    return first - second - exact


@dataclass(frozen=True)
class SymplecticForm:
    """A closed 2-form with an exact inverse bivector.

    The component matrices of ``two_form`` and ``inverse_bivector`` multiply
    to the identity, which under the conventions above makes
    pi# . omega_flat the identity bundle map.
    """

    two_form: DifferentialForm
    inverse_bivector: Multivector

    def __post_init__(self):
        if self.two_form.degree != 2 or self.inverse_bivector.degree != 2:
            raise DegreeError("symplectic data consists of a 2-form and a bivector")
        if self.two_form.chart != self.inverse_bivector.chart:
            raise ChartMismatchError("symplectic data on different charts")
        closed = exterior_derivative(self.two_form)
        if not closed.is_zero():
            raise ValueError(f"two-form is not closed: d(omega) = {closed}")
        if not self._pairing_is_identity():
            raise ValueError("two-form and bivector component matrices are not mutual inverses")

    def _pairing_is_identity(self) -> bool:
        chart = self.two_form.chart
        w = form_matrix(self.two_form)
        p = full_matrix(self.inverse_bivector)
        n = chart.dim
        for i in range(n):
            for j in range(n):
                entry = chart.zero_poly()
                for k in range(n):
                    entry = entry + w[i][k] * p[k][j]
                expected = chart.constant_poly(1 if i == j else 0)
                if entry != expected:
                    return False
        return True

    @classmethod
    def from_two_form(cls, two_form: DifferentialForm,
                      inverse: Multivector | None = None) -> "SymplecticForm":
        """Build from a closed 2-form.

        With no explicit inverse the component matrix must be constant; it is
        then inverted exactly.  Polynomial matrices require the inverse to be
        supplied (general polynomial matrix inversion is out of scope).
        """
        chart = two_form.chart
        if inverse is None:
            mat = form_matrix(two_form)
            if any(not entry.is_constant() for row in mat for entry in row):
                raise ValueError("non-constant symplectic matrix: supply the inverse bivector")
            const = [[entry.constant_value() for entry in row] for row in mat]
            try:
                inv = _linalg.invert(const)
            except ValueError as exc:
                raise ValueError(f"two-form is degenerate: {exc}") from exc
            comps = {}
            for i in range(chart.dim):
                for j in range(i + 1, chart.dim):
                    if inv[i][j] != 0:
                        comps[(i, j)] = chart.constant_poly(inv[i][j])
            inverse = Multivector(chart, 2, comps)
        return cls(two_form, inverse)

    @property
    def chart(self) -> Chart:
        return self.two_form.chart

    def poisson(self) -> PoissonStructure:
        return PoissonStructure.from_bivector(self.inverse_bivector)

    def flat(self, field: Multivector) -> DifferentialForm:
        """omega_flat(X) = i_X omega."""
        from .chart import interior_product

        return interior_product(field, self.two_form)

    def is_invariant_under(self, field: Multivector) -> DifferentialForm:
        """L_X omega, returned as a residual 2-form (zero iff invariant)."""
        return lie_derivative(field, self.two_form)


def lie_poisson_bivector(chart: Chart, bracket_constants) -> Multivector:
    """Linear bivector on a dual-of-Lie-algebra chart.

    ``bracket_constants[(i, j)]`` for i < j is the coefficient vector of
    [e_i, e_j]; the induced bracket is {x_i, x_j} = sum_k c^k_(ij) x_k.
    """
    n = chart.dim
    comps = {}
    for (i, j), coeffs in bracket_constants.items():
        if not (0 <= i < j < n):
            raise ValueError(f"bracket key {(i, j)} must satisfy 0 <= i < j < dim")
        if len(coeffs) != n:
            raise ValueError(f"coefficient vector for {(i, j)} must have length {n}")
        poly = chart.zero_poly()
        for k, c in enumerate(coeffs):
            if Fraction(c) != 0:
                poly = poly + Fraction(c) * chart.coord_poly(chart.coords[k])
        if not poly.is_zero():
            comps[(i, j)] = poly
    return Multivector(chart, 2, comps)
