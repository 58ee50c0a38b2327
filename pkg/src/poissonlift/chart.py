"""Differential forms and multivector fields on a single coordinate chart.

Both kinds of tensor are stored sparsely: a degree-k tensor on an
n-dimensional chart maps strictly increasing k-tuples of coordinate indices
to polynomial components.  A degree-0 tensor wraps a single polynomial
(keyed by the empty tuple).  Components are always normalized to the chart's
full coordinate universe, in chart order.

The Schouten bracket is computed by the coordinate formula: writing a
degree-a multivector as a polynomial in anticommuting symbols xi_i (one per
coordinate vector field), the bracket is

    [A, B] = A . B - (-1)^((a-1)(b-1)) B . A,
    A . B  = sum_i (dA/dxi_i) ^ (d_i B),

where dA/dxi_i is the left odd partial derivative and d_i differentiates
coefficients.  On two vector fields this reduces to the Lie bracket, and on
a (vector field, function) pair to the directional derivative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ChartMismatchError, DegreeError, KindMismatchError
from .poly import Polynomial

Index = tuple[int, ...]


@dataclass(frozen=True)
class Chart:
    """A named chart of R^n with ordered coordinate symbols."""

    name: str
    coords: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(set(self.coords)) != len(self.coords):
            raise ValueError(f"coordinate names must be distinct: {self.coords}")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, name: str) -> int:
        return self.coords.index(name)

    def coord_poly(self, name: str) -> Polynomial:
        return Polynomial.variable(name, self.coords)

    def zero_poly(self) -> Polynomial:
        return Polynomial.zero(self.coords)

    def constant_poly(self, value) -> Polynomial:
        return Polynomial.constant(value, self.coords)


def _sort_index(indices: Iterable[int]) -> tuple[Index, int] | None:
    """Sort an index tuple, tracking permutation parity.

    Returns None when an index repeats (the component vanishes).
    """
    seq = list(indices)
    if len(set(seq)) != len(seq):
        return None
    sign = 1
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    return tuple(seq), sign


class _Tensor:
    """Shared implementation for DifferentialForm and Multivector."""

    kind = "tensor"
    _basis_fmt = "{}"

    __slots__ = ("chart", "degree", "_components")

    def __init__(self, chart: Chart, degree: int, components: Mapping[Index, Polynomial]):
        if degree < 0 or degree > chart.dim:
            raise DegreeError(f"degree {degree} out of range for chart of dim {chart.dim}")
        canon: dict[Index, Polynomial] = {}
        for idx, poly in components.items():
            key = tuple(idx)
            if len(key) != degree:
                raise DegreeError(f"index {key} does not match degree {degree}")
            if any(i < 0 or i >= chart.dim for i in key):
                raise DegreeError(f"index {key} out of range for chart {chart.coords}")
            if list(key) != sorted(set(key)):
                raise DegreeError(f"index {key} must be strictly increasing")
            if not isinstance(poly, Polynomial):
                poly = Polynomial.constant(poly, chart.coords)
            poly = poly.with_variables(chart.coords)
            if not poly.is_zero():
                canon[key] = canon.get(key, chart.zero_poly()) + poly
        self.chart = chart
        self.degree = degree
        self._components = {k: p for k, p in canon.items() if not p.is_zero()}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, chart: Chart, degree: int = 0):
        return cls(chart, degree, {})

    @classmethod
    def from_poly(cls, chart: Chart, poly: Polynomial | int | Fraction):
        if not isinstance(poly, Polynomial):
            poly = Polynomial.constant(poly, chart.coords)
        return cls(chart, 0, {(): poly})

    @classmethod
    def basis(cls, chart: Chart, name: str):
        """Basis element attached to one coordinate (dq for forms, e_q for vectors)."""
        return cls(chart, 1, {(chart.index(name),): chart.constant_poly(1)})

    @classmethod
    def from_terms(cls, chart: Chart, degree: int, terms: Iterable[tuple[Iterable[int], Polynomial]]):
        """Assemble from possibly unsorted, possibly repeating index tuples."""
        acc: dict[Index, Polynomial] = {}
        for idx, poly in terms:
            sorted_idx = _sort_index(idx)
            if sorted_idx is None:
                continue
            key, sign = sorted_idx
            add = poly if sign > 0 else -poly
            acc[key] = acc.get(key, chart.zero_poly()) + add
        return cls(chart, degree, acc)

    # -- inspection ---------------------------------------------------------

    @property
    def components(self) -> dict[Index, Polynomial]:
        return dict(self._components)

    def component(self, idx: Iterable[int | str]) -> Polynomial:
        key = tuple(self.chart.index(i) if isinstance(i, str) else i for i in idx)
        return self._components.get(key, self.chart.zero_poly())

    def is_zero(self) -> bool:
        return not self._components

    def as_poly(self) -> Polynomial:
        if self.degree != 0:
            raise DegreeError(f"degree-{self.degree} tensor is not a function")
        return self._components.get((), self.chart.zero_poly())

    # -- linear structure ----------------------------------------------------

    def _check_compatible(self, other):
        if type(self) is not type(other):
            raise KindMismatchError(f"cannot combine {self.kind} with {other.kind}")
        if self.chart != other.chart:
            raise ChartMismatchError(f"charts differ: {self.chart.name} vs {other.chart.name}")
        if self.degree != other.degree:
            raise DegreeError(f"degrees differ: {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._check_compatible(other)
        comps = dict(self._components)
        for idx, poly in other._components.items():
            comps[idx] = comps.get(idx, self.chart.zero_poly()) + poly
        return type(self)(self.chart, self.degree, comps)

    def __neg__(self):
        return type(self)(self.chart, self.degree, {k: -p for k, p in self._components.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        """Multiplication by a polynomial or rational scalar."""
        if isinstance(scalar, _Tensor):
            raise KindMismatchError("use wedge() for tensor products")
        if not isinstance(scalar, Polynomial):
            scalar = Polynomial.constant(scalar, self.chart.coords)
        return type(self)(
            self.chart, self.degree, {k: p * scalar for k, p in self._components.items()}
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if type(self) is not type(other):
            return NotImplemented
        return (
            self.chart == other.chart
            and self.degree == other.degree
            and self._components == other._components
        )

    __hash__ = None

    # -- printing ------------------------------------------------------------

    def _basis_str(self, idx: Index) -> str:
        return "^".join(self._basis_fmt.format(self.chart.coords[i]) for i in idx)

    def to_string(self) -> str:
        if self.degree == 0:
            return self.as_poly().to_string()
        if not self._components:
            return "0"
        chunks = []
        for idx in sorted(self._components):
            poly = self._components[idx]
            basis = self._basis_str(idx)
            if poly == 1:
                chunks.append(basis)
            elif poly == -1:
                chunks.append(f"-{basis}")
            else:
                chunks.append(f"({poly.to_string()})*{basis}")
        out = chunks[0]
        for text in chunks[1:]:
            out += " - " + text[1:] if text.startswith("-") else " + " + text
        return out

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_string()!r} on {self.chart.name})"


class DifferentialForm(_Tensor):
    kind = "form"
    _basis_fmt = "d{}"

    __slots__ = ()


class Multivector(_Tensor):
    kind = "multivector"
    _basis_fmt = "e_{}"

    __slots__ = ()


def wedge(a: _Tensor, b: _Tensor) -> _Tensor:
    """Exterior product of two tensors of the same kind on the same chart."""
    if type(a) is not type(b):
        raise KindMismatchError(f"cannot wedge {a.kind} with {b.kind}")
    if a.chart != b.chart:
        raise ChartMismatchError(f"charts differ: {a.chart.name} vs {b.chart.name}")
    degree = a.degree + b.degree
    if degree > a.chart.dim:
        return type(a).zero(a.chart, a.chart.dim)
    terms = []
    for ia, pa in a._components.items():
        for ib, pb in b._components.items():
            terms.append((ia + ib, pa * pb))
    return type(a).from_terms(a.chart, degree, terms)


def exterior_derivative(omega: DifferentialForm) -> DifferentialForm:
    """de Rham differential; raises KindMismatch on multivectors."""
    if not isinstance(omega, DifferentialForm):
        raise KindMismatchError("exterior derivative acts on differential forms")
    chart = omega.chart
    if omega.degree >= chart.dim:
        return DifferentialForm.zero(chart, chart.dim)
    terms = []
    for idx, poly in omega._components.items():
        for i, name in enumerate(chart.coords):
            dp = poly.derivative(name)
            if dp.is_zero():
                continue
            terms.append(((i,) + idx, dp))
    return DifferentialForm.from_terms(chart, omega.degree + 1, terms)


def interior_product(field: Multivector, omega: DifferentialForm) -> DifferentialForm:
    """Contraction of a vector field into the first slot of a form."""
    if not isinstance(field, Multivector) or field.degree != 1:
        raise KindMismatchError("interior product takes a degree-1 multivector")
    if not isinstance(omega, DifferentialForm):
        raise KindMismatchError("interior product acts on differential forms")
    if field.chart != omega.chart:
        raise ChartMismatchError(f"charts differ: {field.chart.name} vs {omega.chart.name}")
    if omega.degree == 0:
        raise DegreeError("interior product of a degree-0 form is undefined")
    chart = omega.chart
    terms = []
    for idx, poly in omega._components.items():
        for pos, i in enumerate(idx):
            coeff = field.component((i,))
            if coeff.is_zero():
                continue
            rest = idx[:pos] + idx[pos + 1:]
            contrib = coeff * poly
            if pos % 2:
                contrib = -contrib
            terms.append((rest, contrib))
    return DifferentialForm.from_terms(chart, omega.degree - 1, terms)


def _apply_vector(field: Multivector, poly: Polynomial) -> Polynomial:
    """Directional derivative X(f)."""
    chart = field.chart
    out = chart.zero_poly()
    for (i,), comp in field._components.items():
        out = out + comp * poly.with_variables(chart.coords).derivative(chart.coords[i])
    return out


def lie_derivative(field: Multivector, tensor: _Tensor) -> _Tensor:
    """Lie derivative along a vector field.

    On forms this is the Cartan formula i_X d + d i_X (directional derivative
    in degree 0); on multivectors it is the Schouten bracket with the field.
    """
    if not isinstance(field, Multivector) or field.degree != 1:
        raise KindMismatchError("Lie derivative takes a degree-1 multivector")
    if field.chart != tensor.chart:
        raise ChartMismatchError(f"charts differ: {field.chart.name} vs {tensor.chart.name}")
    if isinstance(tensor, DifferentialForm):
        if tensor.degree == 0:
            return DifferentialForm.from_poly(tensor.chart, _apply_vector(field, tensor.as_poly()))
        first = interior_product(field, exterior_derivative(tensor))
        second = exterior_derivative(interior_product(field, tensor))
        if first.degree != second.degree:
            # d of a top-degree form is a degree-clamped zero tensor
            assert first.is_zero()
            return second
        return first + second
    return schouten_bracket(field, tensor)


def _odd_partial(t: Multivector, i: int) -> Multivector:
    """Left derivative with respect to the anticommuting symbol of coordinate i."""
    comps: dict[Index, Polynomial] = {}
    for idx, poly in t._components.items():
        if i not in idx:
            continue
        pos = idx.index(i)
        rest = idx[:pos] + idx[pos + 1:]
        comps[rest] = poly if pos % 2 == 0 else -poly
    return Multivector(t.chart, t.degree - 1, comps)


def _coeff_derivative(t: Multivector, name: str) -> Multivector:
    return Multivector(
        t.chart, t.degree, {k: p.derivative(name) for k, p in t._components.items()}
    )


def _schouten_half(a: Multivector, b: Multivector) -> Multivector:
    chart = a.chart
    deg = a.degree + b.degree - 1
    out_deg = min(max(deg, 0), chart.dim)
    if a.degree == 0 or deg > chart.dim:
        return Multivector.zero(chart, out_deg)
    acc = Multivector.zero(chart, deg)
    for i, name in enumerate(chart.coords):
        left = _odd_partial(a, i)
        right = _coeff_derivative(b, name)
        if left.is_zero() or right.is_zero():
            continue
        acc = acc + wedge(left, right)
    return acc


def schouten_bracket(a: Multivector, b: Multivector) -> Multivector:
    """Schouten bracket of multivector fields (degree |a|+|b|-1).

    With D(A, B) = sum_i (dA/dxi_i) ^ (d_i B) the bracket is

        [A, B] = (-1)^(|A|-1) D(A, B) - (-1)^((|A|-1)(|B|-1) + |B|-1) D(B, A),

    the unique sign layout for which [ , ] restricts to the Lie bracket on
    vector fields and the directional derivative on (field, function) pairs
    while staying graded antisymmetric and a graded derivation of the wedge
    in its second slot.
    """
    if not isinstance(a, Multivector) or not isinstance(b, Multivector):
        raise KindMismatchError("Schouten bracket acts on multivectors")
    if a.chart != b.chart:
        raise ChartMismatchError(f"charts differ: {a.chart.name} vs {b.chart.name}")
    if a.degree == 0 and b.degree == 0:
        return Multivector.zero(a.chart, 0)
    u, v = a.degree - 1, b.degree - 1
    first = _schouten_half(a, b)
    second = _schouten_half(b, a)
    if u % 2:
        first = -first
    if (u * v + v) % 2 == 0:
        second = -second
    return first + second


def jacobi_check(bivector: Multivector) -> Multivector:
    """The trivector [pi, pi]; the bivector is Poisson iff this vanishes."""
    if bivector.degree != 2:
        raise DegreeError("Jacobi check takes a bivector")
    return schouten_bracket(bivector, bivector)
