"""The unified space-time convection-diffusion operator on k-forms.

Builds the convection 1-form with dt-component -1/epsilon, the flux operator
(exterior derivative plus convection wedge), the weighted Hodge Laplacian and
the full operator, and verifies the component-wise expansions against the
independent vector-calculus oracle.  Also houses the potential construction
and the exponentially fitted form of the flux.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import vectorcalc as vc
from .fields import ExpPolyField, PolyField, T
from .forms import (
    BasisForm,
    KForm,
    MaterialParams,
    T_BIT,
    codifferential_1a,
    codifferential_a1,
    display_components,
    exterior_derivative,
    hodge_star,
    merge_sign,
    spatial_form,
    star_sign,
    temporal_parts,
    wedge,
)

PIECES = ("delta_d", "delta_wedge", "d_delta")


class NoPotentialError(ValueError):
    """The convection 1-form is not closed, so no scalar potential exists."""

    def __init__(self, components):
        self.components = list(components)
        labels = ", ".join(f"{label}: {coeff}" for label, coeff in self.components)
        super().__init__(f"convection form is not closed; nonzero derivative components: {labels}")


@dataclass(frozen=True)
class ConvectionForm:
    """The convection 1-form beta/alpha on the spatial slots, -1/epsilon on dt."""

    form: KForm
    material: MaterialParams

    def __post_init__(self):
        dt_coeff = self.form.coefficient(BasisForm(T_BIT))
        if dt_coeff != PolyField.constant(-1 / Fraction(self.material.epsilon)):
            raise ValueError("dt component must be exactly -1/epsilon")


@dataclass(frozen=True)
class Potential:
    """Scalar potential whose exterior derivative is the convection form."""

    psi0: PolyField
    convection: ConvectionForm


def build_convection_form(m: MaterialParams) -> ConvectionForm:
    if m.alpha_field is not None:
        raise ValueError("convection form requires a constant diffusion coefficient")
    inv_alpha = Fraction(1) / m.alpha
    comps = {BasisForm(1 << i): m.beta[i] * inv_alpha for i in range(3)}
    comps[BasisForm(T_BIT)] = PolyField.constant(-Fraction(1) / m.epsilon)
    return ConvectionForm(KForm(1, comps), m)


def flux(w: KForm, b: ConvectionForm) -> KForm:
    """Convection-diffusion flux: d(w) + b ^ w, mapping degree k to k + 1."""
    if w.degree >= 4:
        return KForm.zero(w.degree + 1)
    return exterior_derivative(w) + wedge(b.form, w)


def scaled_star_convection(w: KForm, m: MaterialParams) -> KForm:
    """scaled_star(b ^ w) computed without materializing beta/alpha.

    The spatial-slot products of the convection form pick up the alpha weight
    of the scaled star, which cancels the 1/alpha in the convection
    coefficients; the dt-slot product picks up epsilon, cancelling 1/epsilon.
    Exact for spatially varying alpha as well, provided w carries no
    dt-involving components (the solution-form construction guarantees that).
    """
    comps = {}

    def accumulate(basis, coeff):
        sign = star_sign(basis.mask)
        target = basis.complement
        term = coeff if sign > 0 else -coeff
        comps[target] = comps[target] + term if target in comps else term

    for basis, coeff in w.components.items():
        if basis.contains_dt:
            raise ValueError(
                "fused convection star needs dt-free components; "
                f"found {basis.label}"
            )
        for i in range(3):
            bit = 1 << i
            sign = merge_sign(bit, basis.mask)
            if sign == 0:
                continue
            term = m.beta[i] * coeff
            accumulate(BasisForm(basis.mask | bit), term if sign > 0 else -term)
        sign = merge_sign(T_BIT, basis.mask)
        term = -coeff
        accumulate(BasisForm(basis.mask | T_BIT), term if sign > 0 else -term)
    return KForm(4 - (w.degree + 1), comps)


def _delta_wedge_piece(w: KForm, m: MaterialParams) -> KForm:
    """The convection contribution: weighted codifferential of b ^ w."""
    if w.degree >= 4:
        # the convection wedge overflows degree four, so this piece vanishes
        return KForm.zero(w.degree)
    dt_free = not any(basis.contains_dt for basis in w.components)
    if dt_free:
        starred = scaled_star_convection(w, m)
        return -hodge_star(exterior_derivative(starred))
    if m.alpha_field is not None:
        raise ValueError(
            "spatially varying alpha supports only dt-free solution forms"
        )
    return codifferential_1a(wedge(build_convection_form(m).form, w), m)


def operator_pieces(w: KForm, m: MaterialParams) -> dict:
    """The three structural pieces of the unified operator, separately.

    delta_d      : weighted codifferential of the exterior derivative
    delta_wedge  : weighted codifferential of the convection wedge
    d_delta      : exterior derivative of the swapped-weight codifferential
    """
    k = w.degree
    delta_d = codifferential_1a(exterior_derivative(w), m)
    delta_wedge = _delta_wedge_piece(w, m)
    if k == 0:
        # no codifferential below 0-forms; this piece is identically zero
        d_delta = KForm.zero(0)
    else:
        d_delta = exterior_derivative(codifferential_a1(w, m))
    return {"delta_d": delta_d, "delta_wedge": delta_wedge, "d_delta": d_delta}


def unified_operator(w: KForm, m: MaterialParams) -> KForm:
    """Full operator: codiff(flux w) + d(codiff w), same degree as the input."""
    pieces = operator_pieces(w, m)
    return pieces["delta_d"] + pieces["delta_wedge"] + pieces["d_delta"]


def hodge_laplacian(w: KForm, m: MaterialParams) -> KForm:
    """Weighted Hodge Laplacian: the unified operator without convection."""
    k = w.degree
    first = codifferential_1a(exterior_derivative(w), m)
    if k == 0:
        return first
    return first + exterior_derivative(codifferential_a1(w, m))


# ---------------------------------------------------------------------------
# component-wise expansion against the classical oracle
# ---------------------------------------------------------------------------


@dataclass
class ExpansionRow:
    label: str
    input_coefficient: PolyField
    actual: dict
    expected: dict

    def residuals(self) -> dict:
        out = {}
        for col in (*PIECES, "total"):
            diff = self.actual[col] - self.expected[col]
            if not diff.is_zero:
                out[col] = diff
        return out


@dataclass
class ExpansionReport:
    degree: int
    rows: list

    @property
    def matches(self) -> bool:
        return not self.failures()

    def failures(self) -> list:
        out = []
        for row in self.rows:
            for col, diff in row.residuals().items():
                out.append(f"expand[k={self.degree}][{row.label}][{col}]: residual {diff}")
        return out


def _coerce_solution_fields(degree, fields):
    if isinstance(fields, KForm):
        if fields.degree != degree:
            raise ValueError(f"form degree {fields.degree} does not match k={degree}")
        if any(b.contains_dt for b in fields.components):
            bad = [b.label for b in fields.components if b.contains_dt]
            raise ValueError(f"solution forms carry no dt components; found {bad}")
        from .forms import spatial_parts

        return spatial_parts(fields) if degree < 4 else None
    return fields


def _expected_cells(degree, fields, m):
    """Per display-basis expected cells from the classical oracle."""
    eps = PolyField.constant(m.epsilon)
    alpha = m.spatial_diffusion
    beta = m.beta
    zero = PolyField.zero()
    rows = {}
    if degree == 0:
        u = fields
        rows["1"] = {
            "delta_d": -eps * vc.time_derivative(u, 2) - vc.divergence(vc.scale(vc.gradient(u), alpha)),
            "delta_wedge": vc.time_derivative(u) - vc.divergence(vc.scale(beta, u)),
            "d_delta": zero,
        }
    elif degree == 1:
        u = tuple(fields)
        curl_alpha = vc.curl(vc.scale(vc.curl(u), alpha))
        curl_beta = vc.curl(vc.cross(beta, u))
        div_u = vc.divergence(u)
        ut = tuple(vc.time_derivative(c) for c in u)
        for i, label in enumerate(("dx", "dy", "dz")):
            rows[label] = {
                "delta_d": -eps * vc.time_derivative(u[i], 2) + curl_alpha[i],
                "delta_wedge": vc.time_derivative(u[i]) + curl_beta[i],
                "d_delta": -(eps * div_u).diff(i),
            }
        rows["dt"] = {
            "delta_d": eps * vc.divergence(ut),
            "delta_wedge": -div_u,
            "d_delta": -(eps * div_u).diff(T),
        }
    elif degree == 2:
        u = tuple(fields)
        div_u = vc.divergence(u)
        curl_u = vc.curl(u)
        curl_eps_curl = vc.curl(vc.scale(curl_u, eps))
        curl_ut = vc.curl(tuple(vc.time_derivative(c) for c in u))
        beta_dot_u = vc.dot(beta, u)
        for i, label in enumerate(("dy^dz", "dz^dx", "dx^dy")):
            rows[label] = {
                "delta_d": -eps * vc.time_derivative(u[i], 2) - (alpha * div_u).diff(i),
                "delta_wedge": vc.time_derivative(u[i]) - beta_dot_u.diff(i),
                "d_delta": curl_eps_curl[i],
            }
        for i, label in enumerate(("dx^dt", "dy^dt", "dz^dt")):
            rows[label] = {
                "delta_d": eps * curl_ut[i],
                "delta_wedge": -curl_u[i],
                "d_delta": -(eps * curl_u[i]).diff(T),
            }
    elif degree == 3:
        u = fields
        grad_u = vc.gradient(u)
        rows["dx^dy^dz"] = {
            "delta_d": -eps * vc.time_derivative(u, 2),
            "delta_wedge": vc.time_derivative(u),
            "d_delta": -vc.divergence(vc.scale(grad_u, eps)),
        }
        for i, label in enumerate(("dy^dz^dt", "dz^dx^dt", "dx^dy^dt")):
            rows[label] = {
                "delta_d": eps * vc.time_derivative(grad_u[i]),
                "delta_wedge": -grad_u[i],
                "d_delta": -(eps * grad_u[i]).diff(T),
            }
    elif degree == 4:
        rows["dx^dy^dz^dt"] = {"delta_d": zero, "delta_wedge": zero, "d_delta": zero}
    else:
        raise ValueError(f"degree out of range: {degree}")
    for cells in rows.values():
        cells["total"] = cells["delta_d"] + cells["delta_wedge"] + cells["d_delta"]
    return rows


def expand_componentwise(degree: int, fields, m: MaterialParams) -> ExpansionReport:
    """Evaluate the operator pieces per display basis and compare exactly.

    ``fields`` is a scalar field for degrees 0 and 3, an ordered triple for
    degrees 1 and 2, ignored for degree 4.  A prebuilt solution form is also
    accepted; forms with dt-involving components are rejected.
    """
    fields = _coerce_solution_fields(degree, fields)
    w = spatial_form(degree, fields)
    pieces = operator_pieces(w, m)
    actual_cols = {name: dict(display_components(piece)) for name, piece in pieces.items()}
    total = pieces["delta_d"] + pieces["delta_wedge"] + pieces["d_delta"]
    actual_cols["total"] = dict(display_components(total))
    expected = _expected_cells(degree, fields, m)

    input_coeffs = dict(display_components(w))
    rows = []
    for label, cells in expected.items():
        actual = {col: actual_cols[col].get(label, PolyField.zero()) for col in (*PIECES, "total")}
        rows.append(ExpansionRow(label, input_coeffs.get(label, PolyField.zero()), actual, cells))
    return ExpansionReport(degree, rows)


def emergent_constraint(degree: int, fields, m: MaterialParams):
    """The dt-involving block of the unified operator output.

    On polynomial fields the mixed-derivative terms cancel identically and
    the block reduces to minus the divergence (k=1), minus the curl (k=2) or
    minus the gradient (k=3) of the classical input.
    """
    if degree not in (1, 2, 3):
        raise ValueError(f"constraint block exists for degrees 1..3, got {degree}")
    fields = _coerce_solution_fields(degree, fields)
    w = spatial_form(degree, fields)
    return temporal_parts(unified_operator(w, m))


# ---------------------------------------------------------------------------
# potential and exponentially fitted flux
# ---------------------------------------------------------------------------


def make_potential(b: ConvectionForm) -> Potential:
    """Scalar potential of a closed convection form, zero at the origin.

    Uses exact path integration along the coordinate axes; raises
    NoPotentialError naming the nonzero derivative components otherwise.
    """
    closedness = exterior_derivative(b.form)
    if not closedness.is_zero:
        bad = [(label, c) for label, c in display_components(closedness) if not c.is_zero]
        raise NoPotentialError(bad)
    psi = PolyField.zero()
    for axis in range(4):
        component = b.form.coefficient(BasisForm(1 << axis))
        if isinstance(component, ExpPolyField):
            component = component.to_poly()
        for later in range(axis + 1, 4):
            component = component.substitute(later, 0)
        psi = psi + component.integrate(axis)
    assert exterior_derivative(KForm.from_scalar(psi)) == b.form
    return Potential(psi, b)


def exp_fitted_flux(w: KForm, p: Potential) -> KForm:
    """The flux written as exp(-psi) d(exp(psi) w); the weights cancel exactly."""
    if w.degree >= 4:
        return KForm.zero(w.degree + 1)
    lift = ExpPolyField(p.psi0, PolyField.one())
    unlift = ExpPolyField(-p.psi0, PolyField.one())
    return exterior_derivative(w.scale(lift)).scale(unlift)
