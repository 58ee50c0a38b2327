"""Momentum-map machinery: bracket/cobracket-compatible families of 1-forms,
their fiber-linear counterparts on the tangent bundle, and the exact
identities that make the zero level set coisotropic and tie the lifted
generators to Hamiltonian fields.

A certified family phi: g -> 1-forms satisfies, for the attached bialgebra,

    (i)  phi_[x, y] = [phi_x, phi_y]_pi            (Koszul bracket)
    (ii) d(phi_i)   = sum_(j<k) gamma^(jk)_i phi_j ^ phi_k

and the induced fiber-linear functions c_i = i_T(phi_i) then close under the
lifted Poisson bracket: {c_i, c_j}_TM = c_[e_i, e_j].  Checks that require
certified inputs accept require_certified=False so that negative controls can
observe the nonzero residuals directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _linalg
from .bialgebra import LieBialgebra
from .chart import (
    Chart,
    DifferentialForm,
    Multivector,
    exterior_derivative,
    wedge,
)
from .errors import (
    ChartMismatchError,
    DegreeError,
    DimensionMismatchError,
    LevelSetError,
    NotSymplecticActionError,
    UnverifiedInputError,
)
from .oracle import SamplePlan, sample_residual
from .poisson import (
    PoissonStructure,
    SymplecticForm,
    differential,
    form_matrix,
    hamiltonian_vf,
    koszul_bracket,
    poisson_bracket,
    sharp,
)
from .poly import Polynomial
from .report import CheckReport, make_report
from .tangent import (
    CoordinateMap,
    TangentChart,
    base_pullback,
    complete_lift_bivector,
    complete_lift_vf,
    cotangent_chart,
    i_T,
    tangent_chart,
)


@dataclass(frozen=True)
class PGMap:
    """Linear map from a bialgebra into 1-forms, stored as basis images."""

    bialgebra: LieBialgebra
    chart: Chart
    images: tuple[DifferentialForm, ...]

    def __post_init__(self):
        if len(self.images) != self.bialgebra.dim:
            raise DimensionMismatchError(
                f"{len(self.images)} images for bialgebra of dim {self.bialgebra.dim}"
            )
        for form in self.images:
            if form.chart != self.chart:
                raise ChartMismatchError("image form lives on the wrong chart")
            if form.degree != 1:
                raise DegreeError("images must be 1-forms")

    def image(self, xs: Sequence) -> DifferentialForm:
        """Linear combination of basis images."""
        vec = self.bialgebra._vector(xs)
        out = DifferentialForm.zero(self.chart, 1)
        for coeff, form in zip(vec, self.images):
            if coeff != 0:
                out = out + form * coeff
        return out


@dataclass(frozen=True)
class FiberLinearFunction:
    """A function on TM of the shape sum_j theta_j(q) v_j, kept as its base 1-form."""

    base_form: DifferentialForm

    def __post_init__(self):
        if self.base_form.degree != 1:
            raise DegreeError("fiber-linear functions come from 1-forms")

    @property
    def chart(self) -> Chart:
        return self.base_form.chart

    def as_polynomial(self, tc: TangentChart | None = None) -> Polynomial:
        if tc is None:
            tc = tangent_chart(self.chart)
        return i_T(tc, self.base_form).as_poly()


@dataclass(frozen=True)
class MomentumMapData:
    """Components of a map into the dual of the bialgebra, one polynomial each."""

    chart: Chart
    components: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "components",
            tuple(p.with_variables(self.chart.coords) for p in self.components),
        )


# -- certification --------------------------------------------------------------


def pgmap_residuals(pg: PGMap, pi: PoissonStructure) -> dict[str, DifferentialForm]:
    """Residual forms of the two compatibility axioms, named per basis datum."""
    b = pg.bialgebra
    residuals: dict[str, DifferentialForm] = {}
    for i in range(b.dim):
        for j in range(i + 1, b.dim):
            expected = pg.image(b.bracket(i, j))
            actual = koszul_bracket(pi, pg.images[i], pg.images[j])
            residuals[f"bracket-axiom[{b.basis[i]},{b.basis[j]}]"] = expected - actual
    for i in range(b.dim):
        rhs = DifferentialForm.zero(pg.chart, 2)
        for (j, k), gamma in b.cobracket_row(i).items():
            rhs = rhs + wedge(pg.images[j], pg.images[k]) * gamma
        residuals[f"cocycle-axiom[{b.basis[i]}]"] = exterior_derivative(pg.images[i]) - rhs
    return residuals


def certify_pgmap(pg: PGMap, pi: PoissonStructure, plan: SamplePlan | None = None) -> CheckReport:
    """Exact verdict on both axioms; requires verified bialgebra and Poisson data."""
    _require_verified_inputs(pg, pi)
    residuals = pgmap_residuals(pg, pi)
    samples = ()
    if plan is not None:
        samples = tuple((name, sample_residual(res, plan)) for name, res in residuals.items())
    return make_report(
        "pgmap-certification",
        "phi_[x,y] = [phi_x, phi_y]_pi and d(phi_i) = sum gamma^(jk)_i phi_j^phi_k",
        residuals,
        samples=samples,
    )


def _require_verified_inputs(pg: PGMap, pi: PoissonStructure) -> None:
    if not pi.jacobi_verified:
        raise UnverifiedInputError("Poisson structure is not Jacobi-verified")
    if not pg.bialgebra.verified:
        raise UnverifiedInputError("bialgebra failed (or skipped) its structure checks")
    if pg.chart != pi.chart:
        raise ChartMismatchError("map images and Poisson structure on different charts")


def _require_certified(pg: PGMap, pi: PoissonStructure, require_certified: bool) -> None:
    _require_verified_inputs(pg, pi)
    if not require_certified:
        return
    bad = [name for name, res in pgmap_residuals(pg, pi).items() if not res.is_zero()]
    if bad:
        raise UnverifiedInputError(f"map is not certified; failing residuals: {', '.join(bad)}")


# -- generators and fiber-linear functions ---------------------------------------


def generator(pg: PGMap, pi: PoissonStructure, xs: Sequence) -> Multivector:
    """Action generator pi#(phi_x) for a coefficient vector x."""
    return sharp(pi, pg.image(xs))


def comomentum(pg: PGMap, xs: Sequence) -> FiberLinearFunction:
    """The fiber-linear function i_T(phi_x) on the tangent chart."""
    return FiberLinearFunction(pg.image(xs))


def comomentum_components(pg: PGMap, tc: TangentChart | None = None) -> list[Polynomial]:
    if tc is None:
        tc = tangent_chart(pg.chart)
    return [i_T(tc, form).as_poly() for form in pg.images]


# -- bracket closure of the zero level set ----------------------------------------


def bracket_closure_residuals(pg: PGMap, pi: PoissonStructure) -> dict[str, Polynomial]:
    """{c_i, c_j}_TM - c_[e_i, e_j] for every ordered basis pair."""
    b = pg.bialgebra
    tc = tangent_chart(pg.chart)
    pi_tm = complete_lift_bivector(pi, tc)
    c = comomentum_components(pg, tc)
    residuals: dict[str, Polynomial] = {}
    for i in range(b.dim):
        for j in range(i + 1, b.dim):
            lifted = poisson_bracket(pi_tm, c[i], c[j])
            expected = tc.total.zero_poly()
            for k, coeff in enumerate(b.bracket(i, j)):
                if coeff != 0:
                    expected = expected + coeff * c[k]
            residuals[f"closure[{b.basis[i]},{b.basis[j]}]"] = lifted - expected
    return residuals


def bracket_closure_check(pg: PGMap, pi: PoissonStructure, *, require_certified: bool = True,
                          plan: SamplePlan | None = None) -> CheckReport:
    """Certifies that the zero level set of c is coisotropic: the lifted
    bracket of generators lands back in the generated ideal."""
    _require_certified(pg, pi, require_certified)
    residuals = bracket_closure_residuals(pg, pi)
    samples = ()
    if plan is not None:
        samples = tuple((name, sample_residual(res, plan)) for name, res in residuals.items())
    return make_report(
        "bracket-closure",
        "{c_i, c_j}_TM = c_[e_i, e_j] for the fiber-linear momentum components",
        residuals,
        samples=samples,
    )


# -- lifted generators --------------------------------------------------------------


def tangent_generator(pg: PGMap, pi: PoissonStructure, xs: Sequence,
                      require_certified: bool = True) -> Multivector:
    """Lifted generator X_(i_T phi_x) + pi_TM#(i_T d phi_x) on the tangent chart."""
    _require_certified(pg, pi, require_certified)
    tc = tangent_chart(pg.chart)
    pi_tm = complete_lift_bivector(pi, tc)
    phi = pg.image(xs)
    hamiltonian_part = hamiltonian_vf(pi_tm, i_T(tc, phi).as_poly())
    twist = i_T(tc, exterior_derivative(phi))
    if twist.is_zero():
        return hamiltonian_part
    return hamiltonian_part + sharp(pi_tm, twist)


def tangent_generator_direct(pg: PGMap, pi: PoissonStructure, xs: Sequence,
                             require_certified: bool = True) -> Multivector:
    """Complete lift of the base generator; must agree with tangent_generator."""
    _require_certified(pg, pi, require_certified)
    tc = tangent_chart(pg.chart)
    return complete_lift_vf(tc, generator(pg, pi, xs))


def tangent_generator_residuals(pg: PGMap, pi: PoissonStructure,
                                require_certified: bool = True) -> dict[str, Multivector]:
    b = pg.bialgebra
    residuals = {}
    for i in range(b.dim):
        unit = [Fraction(0)] * b.dim
        unit[i] = Fraction(1)
        lhs = tangent_generator(pg, pi, unit, require_certified)
        rhs = tangent_generator_direct(pg, pi, unit, require_certified)
        residuals[f"generator[{b.basis[i]}]"] = lhs - rhs
    return residuals


def tangent_generator_check(pg: PGMap, pi: PoissonStructure, *, require_certified: bool = True,
                            plan: SamplePlan | None = None) -> CheckReport:
    residuals = tangent_generator_residuals(pg, pi, require_certified)
    samples = ()
    if plan is not None:
        samples = tuple((name, sample_residual(res, plan)) for name, res in residuals.items())
    return make_report(
        "tangent-generator-agreement",
        "X_(i_T phi) + pi_TM#(i_T d phi) equals the complete lift of pi#(phi)",
        residuals,
        samples=samples,
    )


# -- the ideal-coefficient identity ----------------------------------------------------


def characteristic_identity_residuals(pg: PGMap) -> dict[str, DifferentialForm]:
    """i_T(d phi_i) - sum_(j<k) gamma^(jk)_i (c_j tau*phi_k - c_k tau*phi_j).

    A formal consequence of the cobracket axiom; exhibits the lifted
    generator minus the Hamiltonian field of c_i with coefficients in the
    ideal generated by the c_j."""
    b = pg.bialgebra
    tc = tangent_chart(pg.chart)
    c = comomentum_components(pg, tc)
    residuals: dict[str, DifferentialForm] = {}
    for i in range(b.dim):
        lhs = i_T(tc, exterior_derivative(pg.images[i]))
        rhs = DifferentialForm.zero(tc.total, 1)
        for (j, k), gamma in b.cobracket_row(i).items():
            pulled_k = base_pullback(tc, pg.images[k])
            pulled_j = base_pullback(tc, pg.images[j])
            rhs = rhs + (pulled_k * c[j] - pulled_j * c[k]) * gamma
        residuals[f"characteristic[{b.basis[i]}]"] = lhs - rhs
    return residuals


def characteristic_identity_check(pg: PGMap, pi: PoissonStructure, *,
                                  require_certified: bool = True,
                                  plan: SamplePlan | None = None) -> CheckReport:
    _require_certified(pg, pi, require_certified)
    residuals = characteristic_identity_residuals(pg)
    samples = ()
    if plan is not None:
        samples = tuple((name, sample_residual(res, plan)) for name, res in residuals.items())
    return make_report(
        "characteristic-identity",
        "i_T(d phi_i) = sum gamma^(jk)_i (c_j tau*phi_k - c_k tau*phi_j)",
        residuals,
        samples=samples,
    )


# -- Hamiltonian special case -----------------------------------------------------------


def hamiltonian_comomentum(momentum: MomentumMapData) -> list[FiberLinearFunction]:
    """c_i = d_T(J_i), packaged via the exact 1-forms dJ_i."""
    chart = momentum.chart
    return [FiberLinearFunction(differential(chart, j)) for j in momentum.components]


def hamiltonian_pgmap(momentum: MomentumMapData, bialgebra: LieBialgebra) -> PGMap:
    """The family with images dJ_i."""
    chart = momentum.chart
    return PGMap(bialgebra, chart, tuple(differential(chart, j) for j in momentum.components))


def level_set_tangency_check(momentum: MomentumMapData, parametrization: CoordinateMap,
                             samples: Sequence[Sequence[Fraction]]) -> CheckReport:
    """At sampled points of a zero-level parametrization, tangent vectors of
    the parametrization annihilate d_T(J), and conversely every annihilating
    vector lies in the parametrization's tangent span (exact rank test).

    Samples where the differential of J drops rank are reported as
    RankDeficient and make the verdict informative rather than pass/fail.
    """
    chart = momentum.chart
    if parametrization.target != chart:
        raise ChartMismatchError("parametrization must land in the momentum chart")
    for j_comp in momentum.components:
        pulled = j_comp.compose(dict(zip(chart.coords, parametrization.components)))
        if not pulled.is_zero():
            raise LevelSetError(
                f"J does not vanish on the parametrized set: residual {pulled}"
            )
    jac = parametrization.jacobian()  # [chart.dim][param.dim]
    grads = [[j_comp.derivative(c) for c in chart.coords] for j_comp in momentum.components]
    m = parametrization.source.dim
    n = chart.dim
    residuals: dict[str, Fraction] = {}
    informative_entries: list[tuple[str, str]] = []
    failures = 0
    for s_index, s in enumerate(samples):
        assignment = dict(zip(parametrization.source.coords, (Fraction(x) for x in s)))
        point = [p.substitute(assignment) for p in parametrization.components]
        point_assignment = dict(zip(chart.coords, point))
        jac_at = [[entry.substitute(assignment) for entry in row] for row in jac]
        grad_at = [[entry.substitute(point_assignment) for entry in row] for row in grads]
        # forward: pushforward directions annihilate d_T(J)
        for a in range(m):
            direction = [jac_at[i][a] for i in range(n)]
            for gi, grad in enumerate(grad_at):
                value = sum((g * d for g, d in zip(grad, direction)), Fraction(0))
                if value != 0:
                    failures += 1
                    residuals[f"pushforward[sample {s_index}, dir {a}, J_{gi}]"] = value
        # converse: kernel of dJ at the point is spanned by the pushforwards
        if _linalg.rank(grad_at) < len(momentum.components):
            informative_entries.append(
                (f"RankDeficient[sample {s_index}]",
                 "differential of J drops rank at this level-set point")
            )
            continue
        columns = [[jac_at[i][a] for i in range(n)] for a in range(m)]
        span_rank = _linalg.rank([list(col) for col in zip(*columns)]) if columns else 0
        for kv in _linalg.kernel_basis(grad_at):
            stacked = [list(row) for row in zip(*(columns + [kv]))] if columns else [[x] for x in kv]
            if _linalg.rank(stacked) != span_rank:
                failures += 1
                residuals[f"kernel-not-spanned[sample {s_index}]"] = Fraction(1)
    entries = [(name, str(value)) for name, value in residuals.items()]
    if failures:
        verdict = "fail"
    elif informative_entries:
        verdict = "informative"
    else:
        verdict = "pass"
    return CheckReport(
        check_id="level-set-tangency",
        identity="(d_T J)^-1(0) restricted over J^-1(0) equals the tangent of J^-1(0)",
        verdict=verdict,
        residuals=tuple(entries + informative_entries),
        samples=(),
    )


# -- symplectic actions --------------------------------------------------------------------


def _abelian_for(generators: Sequence[Multivector]) -> LieBialgebra:
    from .bialgebra import abelian_bialgebra

    return abelian_bialgebra(tuple(f"e{i + 1}" for i in range(len(generators))))


def symplectic_pgmap(omega: SymplecticForm, generators: Sequence[Multivector],
                     bialgebra: LieBialgebra | None = None) -> tuple[PGMap, CheckReport]:
    """Images i_X(omega) for a family of symplectic generators.

    Every generator must preserve the form exactly; the report certifies
    that each image is closed.  Without an explicit bialgebra the family is
    attached to the abelian one with zero cobracket.
    """
    chart = omega.chart
    for index, field in enumerate(generators):
        if field.chart != chart or field.degree != 1:
            raise ChartMismatchError(f"generator #{index} is not a vector field on {chart.name}")
        lie = omega.is_invariant_under(field)
        if not lie.is_zero():
            raise NotSymplecticActionError(index, lie.to_string())
    if bialgebra is None:
        bialgebra = _abelian_for(generators)
    images = tuple(omega.flat(field) for field in generators)
    pg = PGMap(bialgebra, chart, images)
    residuals = {
        f"closed[{bialgebra.basis[i]}]": exterior_derivative(images[i])
        for i in range(len(images))
    }
    report = make_report(
        "symplectic-images-closed",
        "L_X(omega) = 0 implies d(i_X omega) = 0",
        residuals,
    )
    return pg, report


def cotangent_momentum_relation(omega: SymplecticForm, generators: Sequence[Multivector],
                                bialgebra: LieBialgebra | None = None,
                                plan: SamplePlan | None = None) -> CheckReport:
    """Compare the tangent-side momentum c_x = i_T(i_X omega) with the
    cotangent-lift momentum j_x(alpha) = <alpha, X> through the bundle map
    omega_flat: c + j . omega_flat = 0 (or the consistent opposite sign)."""
    pg, _ = symplectic_pgmap(omega, generators, bialgebra)
    chart = omega.chart
    tc = tangent_chart(chart)
    tstar = cotangent_chart(chart)
    n = chart.dim
    w = form_matrix(omega.two_form)
    flat_images: dict[str, Polynomial] = {c: tc.total.coord_poly(c) for c in chart.coords}
    for k, ck in enumerate(chart.coords):
        total = tc.total.zero_poly()
        for i, ci in enumerate(chart.coords):
            if not w[i][k].is_zero():
                total = total + tc.fiber_poly(ci) * w[i][k].with_variables(tc.total.coords)
        flat_images[f"p_{ck}"] = total
    c_polys = comomentum_components(pg, tc)
    plus: dict[str, Polynomial] = {}
    minus: dict[str, Polynomial] = {}
    for index, field in enumerate(generators):
        j_fun = tstar.zero_poly()
        for k, ck in enumerate(chart.coords):
            comp = field.component((k,))
            if not comp.is_zero():
                j_fun = j_fun + tstar.coord_poly(f"p_{ck}") * comp.with_variables(tstar.coords)
        j_through_flat = j_fun.compose(flat_images)
        name = pg.bialgebra.basis[index]
        plus[f"relation[{name}]"] = c_polys[index] + j_through_flat
        minus[f"relation[{name}]"] = c_polys[index] - j_through_flat
    if all(res.is_zero() for res in plus.values()):
        residuals, variant = plus, "c = -(j . omega_flat)"
    elif all(res.is_zero() for res in minus.values()):
        residuals, variant = minus, "c = +(j . omega_flat)"
    else:
        residuals, variant = plus, "c = -(j . omega_flat)"
    samples = ()
    if plan is not None:
        samples = tuple((name, sample_residual(res, plan)) for name, res in residuals.items())
    return make_report(
        "cotangent-momentum-relation",
        f"tangent and cotangent momenta agree through omega_flat: {variant}",
        residuals,
        samples=samples,
    )


# -- helper for randomized certified families ------------------------------------------------


def pgmap_from_momentum(momentum: MomentumMapData, bialgebra: LieBialgebra) -> PGMap:
    """Alias of hamiltonian_pgmap, kept for symmetry with the exact pipeline."""
    return hamiltonian_pgmap(momentum, bialgebra)
