"""Exact exterior algebra on the 4D space-time (x, y, z, t).

Conventions used throughout the package:

* Basis forms are encoded as 4-bit masks over the axes, bit i set when the
  differential of axis i is present.  The canonical internal ordering is
  ascending x < y < z < t; any other wedge order is normalized to canonical
  order with an explicit permutation sign.  In particular the cyclic basis
  element dz^dx used by display tables is stored as dx^dz with a negated
  coefficient; ``parse_basis_label`` performs the translation.
* The metric is Euclidean with signature (+,+,+,+).  The star of a basis
  form dx^I is sign(I, I_complement) * dx^{I_complement}, the sign being the
  parity of the permutation (I, I_complement) of (x, y, z, t).
* The scaled star multiplies the plain star by the spatial diffusion
  coefficient when the input basis form excludes dt, and by the temporal
  perturbation coefficient when it includes dt.
* The interior product with the terminal-time normal strips a trailing dt
  (which is always the final slot in canonical order) with a plus sign and
  annihilates dt-free basis forms.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .fields import AXES, ExpPolyField, PolyField, T, coerce_field

FULL_MASK = 0b1111
T_BIT = 1 << T


class DegreeUnderflowWarning(UserWarning):
    """Codifferential applied below 0-forms; the result is taken to be zero."""


@dataclass(frozen=True)
class BasisForm:
    """One of the sixteen wedge-product basis elements, as an axis bitmask."""

    mask: int

    def __post_init__(self):
        if not 0 <= self.mask <= FULL_MASK:
            raise ValueError(f"mask out of range: {self.mask}")

    @property
    def degree(self) -> int:
        return self.mask.bit_count()

    @property
    def axes(self) -> tuple:
        return tuple(i for i in range(4) if self.mask >> i & 1)

    @property
    def contains_dt(self) -> bool:
        return bool(self.mask & T_BIT)

    @property
    def complement(self) -> "BasisForm":
        return BasisForm(self.mask ^ FULL_MASK)

    @property
    def label(self) -> str:
        if self.mask == 0:
            return "1"
        return "^".join(f"d{AXES[i]}" for i in self.axes)

    @classmethod
    def from_axes(cls, axes) -> tuple:
        """Normalize an ordered axis sequence; returns (form, sign).

        The sign is the permutation parity relative to ascending order, or 0
        when an axis repeats (in which case the form is None).
        """
        seen = 0
        sign = 1
        order = []
        for a in axes:
            bit = 1 << a
            if seen & bit:
                return None, 0
            # count previously placed axes larger than this one
            inversions = sum(1 for b in order if b > a)
            if inversions % 2:
                sign = -sign
            order.append(a)
            seen |= bit
        return cls(seen), sign

    def __repr__(self):
        return f"BasisForm({self.label})"


def basis_forms(degree: int) -> list:
    """All basis forms of one degree, in increasing mask order."""
    return [BasisForm(m) for m in range(16) if m.bit_count() == degree]


def merge_sign(mask_a: int, mask_b: int) -> int:
    """Permutation sign of wedging two canonical masks; 0 if they intersect."""
    if mask_a & mask_b:
        return 0
    inversions = 0
    for b in range(4):
        if mask_b >> b & 1:
            inversions += (mask_a >> (b + 1)).bit_count()
    return -1 if inversions % 2 else 1


def star_sign(mask: int) -> int:
    """Parity of the permutation (axes(mask), axes(complement)) of (x,y,z,t)."""
    comp = mask ^ FULL_MASK
    inversions = 0
    for a in range(4):
        if mask >> a & 1:
            inversions += (comp & ((1 << a) - 1)).bit_count()
    return -1 if inversions % 2 else 1


class KForm:
    """A differential form of fixed degree with exact coefficient fields.

    ``components`` maps basis forms of matching degree to nonzero PolyField
    or ExpPolyField coefficients; a missing component means zero.  Degrees
    above four are permitted only for the explicit zero result of degree
    overflow (for example a wedge of two forms whose degrees sum past four)
    and those forms never carry components.
    """

    __slots__ = ("degree", "components")

    def __init__(self, degree: int, components=None):
        degree = int(degree)
        if degree < 0:
            raise ValueError(f"negative form degree: {degree}")
        clean = {}
        for basis, coeff in (components or {}).items():
            if not isinstance(basis, BasisForm):
                basis = BasisForm(int(basis))
            coeff = coerce_field(coeff)
            if isinstance(coeff, ExpPolyField) and coeff.weight.is_zero:
                coeff = coeff.amplitude
            if coeff.is_zero:
                continue
            if basis.degree != degree:
                raise ValueError(
                    f"component {basis.label} has degree {basis.degree}, expected {degree}"
                )
            clean[basis] = coeff
        if degree > 4 and clean:
            raise ValueError("forms of degree above four must be zero")
        self.degree = degree
        self.components = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, degree: int) -> "KForm":
        return cls(degree, {})

    @classmethod
    def from_scalar(cls, value) -> "KForm":
        return cls(0, {BasisForm(0): coerce_field(value)})

    # -- queries ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.components

    def coefficient(self, basis: BasisForm):
        return self.components.get(basis, PolyField.zero())

    def items(self):
        return self.components.items()

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        comps = dict(self.components)
        for basis, coeff in other.components.items():
            if basis in comps:
                comps[basis] = comps[basis] + coeff
            else:
                comps[basis] = coeff
        return KForm(self.degree, comps)

    def __neg__(self):
        return KForm(self.degree, {b: -c for b, c in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor) -> "KForm":
        """Multiply every coefficient by a scalar or coefficient field."""
        factor = coerce_field(factor)
        return KForm(self.degree, {b: factor * c for b, c in self.components.items()})

    def map_coefficients(self, fn) -> "KForm":
        return KForm(self.degree, {b: fn(c) for b, c in self.components.items()})

    def substitute_t(self, value) -> "KForm":
        """Restrict symbolically to a constant-time hyperplane t = value."""
        return self.map_coefficients(lambda c: c.substitute(T, value))

    # -- comparison / display ---------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return self.degree == other.degree and self.components == other.components

    def __hash__(self):
        return hash((self.degree, frozenset(self.components.items())))

    def __repr__(self):
        if self.is_zero:
            return f"KForm<{self.degree}>(0)"
        parts = [
            f"({coeff})*{basis.label}" if basis.mask else f"({coeff})"
            for basis, coeff in sorted(self.components.items(), key=lambda kv: kv[0].mask)
        ]
        return f"KForm<{self.degree}>(" + " + ".join(parts) + ")"


@dataclass(frozen=True)
class MaterialParams:
    """Diffusion and convection data: alpha, epsilon and the spatial field.

    ``alpha`` and ``epsilon`` are exact positive rationals.  ``alpha_field``
    optionally switches on a spatially varying diffusion coefficient; it is
    applied as a polynomial product outside the star operator and is accepted
    only by the operations documented to support it.
    """

    alpha: Fraction = Fraction(1)
    epsilon: Fraction = Fraction(1)
    beta: tuple = (PolyField.zero(), PolyField.zero(), PolyField.zero())
    alpha_field: Optional[PolyField] = None

    def __post_init__(self):
        alpha = Fraction(self.alpha)
        epsilon = Fraction(self.epsilon)
        if alpha <= 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        if epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {epsilon}")
        beta = tuple(PolyField.coerce(b) for b in self.beta)
        if len(beta) != 3:
            raise ValueError("beta must have three components")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "epsilon", epsilon)
        object.__setattr__(self, "beta", beta)
        if self.alpha_field is not None and not isinstance(self.alpha_field, PolyField):
            object.__setattr__(self, "alpha_field", PolyField.coerce(self.alpha_field))

    @property
    def spatial_diffusion(self):
        """The diffusion coefficient as used by the scaled star."""
        return self.alpha_field if self.alpha_field is not None else self.alpha


# ---------------------------------------------------------------------------
# core operations
# ---------------------------------------------------------------------------


def wedge(a: KForm, b: KForm) -> KForm:
    """Graded-anticommutative product; explicit zero above degree four."""
    degree = a.degree + b.degree
    if degree > 4:
        return KForm.zero(degree)
    comps = {}
    for ba, ca in a.components.items():
        for bb, cb in b.components.items():
            sign = merge_sign(ba.mask, bb.mask)
            if sign == 0:
                continue
            basis = BasisForm(ba.mask | bb.mask)
            term = ca * cb
            if sign < 0:
                term = -term
            comps[basis] = comps[basis] + term if basis in comps else term
    return KForm(degree, comps)


def exterior_derivative(w: KForm) -> KForm:
    """Degree-raising derivative; satisfies d(d(w)) = 0 exactly."""
    comps = {}
    for basis, coeff in w.components.items():
        for axis in range(4):
            bit = 1 << axis
            if basis.mask & bit:
                continue
            dc = coeff.diff(axis)
            if dc.is_zero:
                continue
            sign = merge_sign(bit, basis.mask)
            target = BasisForm(basis.mask | bit)
            term = dc if sign > 0 else -dc
            comps[target] = comps[target] + term if target in comps else term
    return KForm(w.degree + 1, comps)


def hodge_star(w: KForm) -> KForm:
    """Euclidean star mapping degree k to degree 4 - k."""
    if w.degree > 4:
        raise ValueError(f"no star for degree {w.degree}")
    comps = {}
    for basis, coeff in w.components.items():
        sign = star_sign(basis.mask)
        comps[basis.complement] = coeff if sign > 0 else -coeff
    return KForm(4 - w.degree, comps)


def scaled_hodge_star(w: KForm, m: MaterialParams) -> KForm:
    """Star weighted by alpha on dt-free inputs and by epsilon otherwise."""
    if w.degree > 4:
        raise ValueError(f"no star for degree {w.degree}")
    comps = {}
    for basis, coeff in w.components.items():
        factor = m.epsilon if basis.contains_dt else m.spatial_diffusion
        sign = star_sign(basis.mask)
        term = coeff * factor
        comps[basis.complement] = term if sign > 0 else -term
    return KForm(4 - w.degree, comps)


def codifferential_1a(w: KForm, m: MaterialParams) -> KForm:
    """Weighted codifferential, literally -(star (d (scaled_star w)))."""
    if w.degree == 0:
        warnings.warn(
            "codifferential below 0-forms is identically zero",
            DegreeUnderflowWarning,
            stacklevel=2,
        )
        return KForm.zero(0)
    if w.degree > 4:
        if not w.is_zero:
            raise ValueError("nonzero form above degree four")
        return KForm.zero(4)
    return -hodge_star(exterior_derivative(scaled_hodge_star(w, m)))


def codifferential_a1(w: KForm, m: MaterialParams) -> KForm:
    """Weighted codifferential with the stars swapped: -(scaled_star (d (star w)))."""
    if w.degree == 0:
        warnings.warn(
            "codifferential below 0-forms is identically zero",
            DegreeUnderflowWarning,
            stacklevel=2,
        )
        return KForm.zero(0)
    if w.degree > 4:
        if not w.is_zero:
            raise ValueError("nonzero form above degree four")
        return KForm.zero(4)
    return -scaled_hodge_star(exterior_derivative(hodge_star(w)), m)


def interior_product_dt(w: KForm) -> KForm:
    """Contraction with the terminal-time normal: strip a trailing dt.

    In canonical ascending order dt always occupies the final wedge slot, so
    the strip carries a plus sign; dt-free components are annihilated.  Note
    that with this convention the contraction is an antiderivation only up to
    the sign (-1)^s, s the number of spatial differentials.
    """
    if w.degree == 0:
        return KForm.zero(0)
    comps = {}
    for basis, coeff in w.components.items():
        if not basis.contains_dt:
            continue
        comps[BasisForm(basis.mask ^ T_BIT)] = coeff
    return KForm(w.degree - 1, comps)


# ---------------------------------------------------------------------------
# classical-field representation and display ordering
# ---------------------------------------------------------------------------

_B_X, _B_Y, _B_Z, _B_T = (BasisForm(1 << i) for i in range(4))
_B_YZ = BasisForm(0b0110)
_B_XZ = BasisForm(0b0101)
_B_XY = BasisForm(0b0011)
_B_XYZ = BasisForm(0b0111)

DISPLAY_LABELS = {
    0: ("1",),
    1: ("dx", "dy", "dz", "dt"),
    2: ("dy^dz", "dz^dx", "dx^dy", "dx^dt", "dy^dt", "dz^dt"),
    3: ("dx^dy^dz", "dy^dz^dt", "dz^dx^dt", "dx^dy^dt"),
    4: ("dx^dy^dz^dt",),
}


def parse_basis_label(label: str) -> tuple:
    """Translate a display label such as 'dz^dx' to (BasisForm, sign)."""
    if label == "1":
        return BasisForm(0), 1
    axes = []
    for token in label.split("^"):
        if len(token) != 2 or token[0] != "d" or token[1] not in AXES:
            raise ValueError(f"bad basis label {label!r}")
        axes.append(AXES.index(token[1]))
    basis, sign = BasisForm.from_axes(axes)
    if basis is None:
        raise ValueError(f"repeated differential in {label!r}")
    return basis, sign


def display_components(w: KForm) -> list:
    """Coefficients of a form in display-basis order, with translated signs."""
    out = []
    for label in DISPLAY_LABELS[w.degree]:
        basis, sign = parse_basis_label(label)
        coeff = w.coefficient(basis)
        out.append((label, coeff if sign > 0 else -coeff))
    return out


def spatial_form(degree: int, fields) -> KForm:
    """Build a solution-style form: classical fields on the dt-free basis.

    Scalars populate degree 0 and 3, ordered triples populate degrees 1 and 2
    (the middle 2-form component sits on the cyclic element dz^dx), and the
    degree-4 form is identically zero.
    """
    if degree == 0:
        return KForm(0, {BasisForm(0): coerce_field(fields)})
    if degree == 1:
        u1, u2, u3 = (coerce_field(f) for f in fields)
        return KForm(1, {_B_X: u1, _B_Y: u2, _B_Z: u3})
    if degree == 2:
        u1, u2, u3 = (coerce_field(f) for f in fields)
        return KForm(2, {_B_YZ: u1, _B_XZ: -u2, _B_XY: u3})
    if degree == 3:
        return KForm(3, {_B_XYZ: coerce_field(fields)})
    if degree == 4:
        return KForm.zero(4)
    raise ValueError(f"degree out of range: {degree}")


def spatial_parts(w: KForm):
    """Inverse of ``spatial_form``: read the dt-free block classically."""
    if w.degree == 0:
        return w.coefficient(BasisForm(0))
    if w.degree == 1:
        return (w.coefficient(_B_X), w.coefficient(_B_Y), w.coefficient(_B_Z))
    if w.degree == 2:
        return (w.coefficient(_B_YZ), -w.coefficient(_B_XZ), w.coefficient(_B_XY))
    if w.degree == 3:
        return w.coefficient(_B_XYZ)
    raise ValueError(f"degree out of range: {w.degree}")


def temporal_parts(w: KForm):
    """The dt-involving block of a form, read in display order.

    Degree 1 yields the scalar dt coefficient; degree 2 the coefficients on
    dx^dt, dy^dt, dz^dt; degree 3 those on dy^dz^dt, dz^dx^dt, dx^dy^dt.
    """
    if w.degree == 1:
        return w.coefficient(_B_T)
    if w.degree == 2:
        return tuple(
            w.coefficient(BasisForm((1 << i) | T_BIT)) for i in range(3)
        )
    if w.degree == 3:
        yzt = w.coefficient(BasisForm(0b1110))
        xzt = w.coefficient(BasisForm(0b1101))
        xyt = w.coefficient(BasisForm(0b1011))
        return (yzt, -xzt, xyt)
    raise ValueError(f"degree out of range: {w.degree}")
