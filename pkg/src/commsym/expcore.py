"""Exact-structure arithmetic for exponential-polynomial functions on R^4.

Everything downstream (operators, symmetry residuals, weight functions) lives
in the class of finite sums

    f(x) = sum_k  c_k * x^alpha_k * exp(kappa_k . x),      x in R^4,

with complex coefficients c_k, monomial multi-indices alpha_k in N^4 and
complex covectors kappa_k.  The class is closed under addition,
multiplication and partial differentiation, so differential identities can be
checked coefficient-wise instead of numerically.

Coefficients and covectors are floating complex numbers: the frame parameters
feeding the scenarios (square roots of quadratic forms) are irrational, so
exact rational arithmetic is not an option.  All zero tests are therefore
tolerance-based, with the dropping threshold taken relative to the largest
coefficient present.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

Index4 = tuple[int, int, int, int]
CVec4 = tuple[complex, complex, complex, complex]

ZERO_ALPHA: Index4 = (0, 0, 0, 0)
ZERO_KAPPA: CVec4 = (0j, 0j, 0j, 0j)

_UNIT: tuple[Index4, ...] = (
    (1, 0, 0, 0),
    (0, 1, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
)


class NonFinite(ArithmeticError):
    """A coefficient or exponent overflowed or turned into NaN."""


@dataclass(frozen=True)
class Tolerances:
    """Numeric thresholds shared by normalization and zero tests.

    zero_tol      drop a term whose coefficient magnitude is below
                  zero_tol * (largest coefficient in the same polynomial)
    merge_tol     absolute per-component distance below which two kappa
                  covectors are treated as the same exponential
    residual_tol  default pass threshold for scenario checks
    """

    zero_tol: float = 1e-10
    merge_tol: float = 1e-12
    residual_tol: float = 1e-9

    def __post_init__(self) -> None:
        if not (self.zero_tol > 0 and self.merge_tol > 0 and self.residual_tol > 0):
            raise ValueError("tolerances must be strictly positive")
        if self.merge_tol > self.zero_tol:
            raise ValueError("merge_tol must not exceed zero_tol")


DEFAULT_TOL = Tolerances()


def _is_finite_complex(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


@dataclass(frozen=True)
class ExpTerm:
    """One summand  coeff * x^alpha * exp(kappa . x)."""

    coeff: complex
    alpha: Index4 = ZERO_ALPHA
    kappa: CVec4 = ZERO_KAPPA

    def is_finite(self) -> bool:
        k = self.kappa
        return (
            cmath.isfinite(self.coeff)
            and cmath.isfinite(k[0])
            and cmath.isfinite(k[1])
            and cmath.isfinite(k[2])
            and cmath.isfinite(k[3])
        )


def _term_sort_key(term: ExpTerm):
    k = term.kappa
    return (
        term.alpha,
        k[0].real, k[0].imag,
        k[1].real, k[1].imag,
        k[2].real, k[2].imag,
        k[3].real, k[3].imag,
    )


def _kappa_close(a: CVec4, b: CVec4, merge_tol: float) -> bool:
    return (
        abs(a[0] - b[0]) <= merge_tol
        and abs(a[1] - b[1]) <= merge_tol
        and abs(a[2] - b[2]) <= merge_tol
        and abs(a[3] - b[3]) <= merge_tol
    )


class ExpPoly:
    """A normalized exponential polynomial (immutable).

    Invariants: no zero-coefficient terms, no two terms sharing the same
    alpha and a kappa within merge tolerance, terms in canonical sort order.
    Use :func:`normalize` or the factory classmethods to build instances.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[ExpTerm] = (), tol: Tolerances = DEFAULT_TOL):
        object.__setattr__(self, "terms", _normalize_terms(terms, tol))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("ExpPoly is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def _raw(cls, terms: tuple[ExpTerm, ...]) -> "ExpPoly":
        out = cls.__new__(cls)
        object.__setattr__(out, "terms", terms)
        return out

    @classmethod
    def zero(cls) -> "ExpPoly":
        return cls._raw(())

    @classmethod
    def constant(cls, c: complex) -> "ExpPoly":
        c = complex(c)
        if c == 0:
            return cls.zero()
        return cls._raw((ExpTerm(c),))

    @classmethod
    def coordinate(cls, a: int) -> "ExpPoly":
        return cls._raw((ExpTerm(1 + 0j, _UNIT[a]),))

    @classmethod
    def monomial(cls, coeff: complex, alpha: Sequence[int]) -> "ExpPoly":
        return cls([ExpTerm(complex(coeff), _as_alpha(alpha))])

    @classmethod
    def exponential(cls, coeff: complex, kappa: Sequence[complex]) -> "ExpPoly":
        return cls([ExpTerm(complex(coeff), ZERO_ALPHA, _as_kappa(kappa))])

    @classmethod
    def linear_form(cls, coeffs: Sequence[complex], const: complex = 0) -> "ExpPoly":
        """The affine function  coeffs[0]*x0 + ... + coeffs[3]*x3 + const."""
        terms = [ExpTerm(complex(c), _UNIT[a]) for a, c in enumerate(coeffs)]
        terms.append(ExpTerm(complex(const)))
        return cls(terms)

    # -- queries -----------------------------------------------------------

    def is_structurally_zero(self) -> bool:
        return not self.terms

    def max_coeff(self) -> float:
        return max((abs(t.coeff) for t in self.terms), default=0.0)

    def witness(self) -> ExpTerm | None:
        """The largest-coefficient term, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(self.terms, key=lambda t: abs(t.coeff))

    def is_zero(self, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> bool:
        """Tolerance-based zero test.

        With no external ``scale`` the reference is the polynomial's own
        largest coefficient, so a normalized nonzero polynomial never tests
        zero; pass the scale of the inputs that produced ``self`` to absorb
        rounding noise from cancellations.
        """
        if not self.terms:
            return True
        ref = self.max_coeff() if scale is None else scale
        return self.max_coeff() <= tol.zero_tol * ref

    def degree(self) -> int:
        return max((sum(t.alpha) for t in self.terms), default=0)

    def has_exponential(self) -> bool:
        return any(k != 0 for t in self.terms for k in t.kappa)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return ExpPoly(self.terms + other.terms)

    def __neg__(self) -> "ExpPoly":
        return ExpPoly._raw(tuple(ExpTerm(-t.coeff, t.alpha, t.kappa) for t in self.terms))

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            prods = []
            for s in self.terms:
                sc, sa, sk = s.coeff, s.alpha, s.kappa
                for o in other.terms:
                    oa, ok = o.alpha, o.kappa
                    prods.append(
                        ExpTerm(
                            sc * o.coeff,
                            (sa[0] + oa[0], sa[1] + oa[1], sa[2] + oa[2], sa[3] + oa[3]),
                            (sk[0] + ok[0], sk[1] + ok[1], sk[2] + ok[2], sk[3] + ok[3]),
                        )
                    )
            return ExpPoly(prods)
        c = complex(other)
        if c == 0:
            return ExpPoly.zero()
        return ExpPoly(ExpTerm(t.coeff * c, t.alpha, t.kappa) for t in self.terms)

    def __rmul__(self, other):
        return self.__mul__(other)

    def derive(self, a: int) -> "ExpPoly":
        """Exact partial derivative with respect to coordinate ``a``."""
        out: list[ExpTerm] = []
        for t in self.terms:
            if t.alpha[a] > 0:
                lowered = list(t.alpha)
                lowered[a] -= 1
                out.append(ExpTerm(t.coeff * t.alpha[a], tuple(lowered), t.kappa))
            if t.kappa[a] != 0:
                out.append(ExpTerm(t.coeff * t.kappa[a], t.alpha, t.kappa))
        return ExpPoly(out)

    def evaluate(self, x: Sequence[float]) -> complex:
        """Pointwise value at a real 4-point."""
        if len(x) != 4 or not all(math.isfinite(float(v)) for v in x):
            raise ValueError("evaluation point must be a finite 4-vector")
        total = 0j
        for t in self.terms:
            mono = 1.0
            for xa, aa in zip(x, t.alpha):
                if aa:
                    mono *= float(xa) ** aa
            phase = sum(k * float(xa) for k, xa in zip(t.kappa, x))
            try:
                total += t.coeff * mono * cmath.exp(phase)
            except OverflowError as exc:
                raise NonFinite("exp overflow during evaluation") from exc
        if not _is_finite_complex(total):
            raise NonFinite("non-finite evaluation result")
        return total

    def substitute_affine(self, A, b) -> "ExpPoly":
        """Compose with the affine change of variables x -> A x + b.

        A is a real 4x4 matrix (any nested sequence), b a real 4-vector.  The
        result is again an exponential polynomial: monomials expand through
        powers of affine forms, the covector maps to A^T kappa with a scalar
        factor exp(kappa . b).
        """
        rows = [[float(A[i][j]) for j in range(4)] for i in range(4)]
        shift = [float(b[i]) for i in range(4)]
        out = ExpPoly.zero()
        for t in self.terms:
            new_kappa = tuple(
                sum(t.kappa[i] * rows[i][j] for i in range(4)) for j in range(4)
            )
            factor = t.coeff * cmath.exp(sum(k * s for k, s in zip(t.kappa, shift)))
            piece = ExpPoly.exponential(factor, new_kappa)
            for a in range(4):
                if t.alpha[a]:
                    affine = ExpPoly.linear_form(rows[a], shift[a])
                    for _ in range(t.alpha[a]):
                        piece = piece * affine
            out = out + piece
        return out

    # -- comparison / repr ---------------------------------------------------

    def approx_eq(self, other: "ExpPoly", tol: float = 1e-10) -> bool:
        scale = max(self.max_coeff(), other.max_coeff(), 1.0)
        return (self - other).max_coeff() <= tol * scale

    def __eq__(self, other) -> bool:
        return isinstance(other, ExpPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "ExpPoly(0)"
        bits = []
        for t in self.terms[:4]:
            mono = "".join(
                f"*x{a}^{p}" if p > 1 else f"*x{a}"
                for a, p in enumerate(t.alpha)
                if p
            )
            expo = "" if all(k == 0 for k in t.kappa) else "*exp(k.x)"
            bits.append(f"({t.coeff:.6g}){mono}{expo}")
        more = "" if len(self.terms) <= 4 else f" ... {len(self.terms)} terms"
        return "ExpPoly(" + " + ".join(bits) + more + ")"


def _as_alpha(alpha: Sequence[int]) -> Index4:
    a = tuple(int(v) for v in alpha)
    if len(a) != 4 or any(v < 0 for v in a):
        raise ValueError("alpha must be four non-negative integers")
    return a  # type: ignore[return-value]


def _as_kappa(kappa: Sequence[complex]) -> CVec4:
    k = tuple(complex(v) for v in kappa)
    if len(k) != 4:
        raise ValueError("kappa must have four components")
    return k  # type: ignore[return-value]


def _normalize_terms(terms: Iterable[ExpTerm], tol: Tolerances) -> tuple[ExpTerm, ...]:
    items = sorted(terms, key=_term_sort_key)

    merged: list[ExpTerm] = []
    for t in items:
        if (
            merged
            and merged[-1].alpha == t.alpha
            and _kappa_close(merged[-1].kappa, t.kappa, tol.merge_tol)
        ):
            prev = merged[-1]
            # keep the first kappa so the representative is order-deterministic
            merged[-1] = ExpTerm(prev.coeff + t.coeff, prev.alpha, prev.kappa)
        else:
            merged.append(t)

    # one aggregate guard instead of per-term checks: NaN/inf anywhere in the
    # coefficients poisons the scale, non-finite kappas are checked on the
    # surviving terms below
    scale = 0.0
    for t in merged:
        scale += abs(t.coeff)
    if not math.isfinite(scale):
        raise NonFinite("non-finite coefficient in term list")
    scale = max((abs(t.coeff) for t in merged), default=0.0)
    if scale == 0.0:
        return ()
    kept = tuple(t for t in merged if abs(t.coeff) > tol.zero_tol * scale)
    for t in kept:
        if not t.is_finite():
            raise NonFinite(f"non-finite term {t!r}")
    return kept


def normalize(terms: Iterable[ExpTerm], tol: Tolerances = DEFAULT_TOL) -> ExpPoly:
    """Canonical form: sorted, merged within tolerance, zero terms dropped.

    The output represents the same function as the input sum.
    """
    return ExpPoly(terms, tol)
