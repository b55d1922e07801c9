"""Symmetry generator search as finite linear algebra.

The symmetry condition  ad_L^p(Q) = zeta(x) L  is linear in the coefficient
functions of Q = xi^a(x) d_a + eta(x) and in zeta.  Restricting xi, eta, zeta
to polynomials of bounded degree turns the condition into a finite homogeneous
linear system ("equate the coefficients of identical derivatives"), whose null
space is computed numerically by SVD.  The module also carries the Lie-algebra
side: structure constants by least-squares closure fitting, one-parameter
flows of affine generators by matrix exponentials, and operator pullbacks
through affine coordinate maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .expcore import ZERO_ALPHA, ExpPoly, ExpTerm, Index4
from .opalg import (
    LinDiffOp,
    SymmetryCandidate,
    ad_power,
    commutator,
    residual_vs_multiple,
)


class UnsupportedCoefficient(ValueError):
    """The operator has exponential coefficients; the polynomial ansatz does not apply."""


class UnsupportedDegree(ValueError):
    """Flow integration requires affine (degree <= 1) generator coefficients."""


class SingularMap(ValueError):
    """The affine map is not invertible."""


class RankDeficiencyAmbiguous(RuntimeError):
    """Singular values cluster across the null cutoff; the tolerance must move."""


class NotClosed(RuntimeError):
    """Commutators leave the span of the candidate basis."""


# gap ratio below which the null cutoff is declared ambiguous
_GAP_GUARD = 10.0


@dataclass(frozen=True)
class AnsatzSpec:
    """Bounded-degree polynomial ansatz for xi^a, eta and zeta."""

    degree: int
    p: int
    zeta_degree: int = 0

    def __post_init__(self) -> None:
        if self.degree < 0 or self.zeta_degree < 0:
            raise ValueError("polynomial degrees must be non-negative")
        if self.p < 1:
            raise ValueError("commutator order p must be >= 1")


@dataclass(frozen=True)
class Unknown:
    """One scalar unknown: a monomial coefficient of xi^a, eta or zeta."""

    kind: str  # "xi" | "eta" | "zeta"
    component: int  # coordinate index for xi, -1 otherwise
    alpha: Index4

    @property
    def label(self) -> str:
        a = ",".join(str(v) for v in self.alpha)
        if self.kind == "xi":
            return f"xi{self.component}[{a}]"
        return f"{self.kind}[{a}]"


@dataclass(frozen=True)
class DeterminingSystem:
    """Homogeneous linear system M v = 0 over the ansatz unknowns."""

    matrix: np.ndarray
    unknowns: tuple[Unknown, ...]
    row_keys: tuple[tuple[Index4, Index4], ...]  # (derivative delta, monomial alpha)
    L: LinDiffOp
    spec: AnsatzSpec

    def decode(self, vec: Sequence[complex]) -> SymmetryCandidate:
        """Turn a coefficient vector back into a symmetry candidate."""
        xi = [ExpPoly.zero() for _ in range(4)]
        eta = ExpPoly.zero()
        zeta = ExpPoly.zero()
        for u, c in zip(self.unknowns, vec):
            c = complex(c)
            if c == 0:
                continue
            mono = ExpPoly([ExpTerm(c, u.alpha)])
            if u.kind == "xi":
                xi[u.component] = xi[u.component] + mono
            elif u.kind == "eta":
                eta = eta + mono
            else:
                zeta = zeta + mono
        return SymmetryCandidate(LinDiffOp.first_order(xi, eta), zeta, self.spec.p)


@dataclass(frozen=True)
class GeneratorBasis:
    """Generators plus (optionally) their Lie-algebra structure constants."""

    generators: tuple[SymmetryCandidate, ...]
    structure: np.ndarray | None = None
    closure_residual: float | None = None
    singular_values: np.ndarray = field(default_factory=lambda: np.zeros(0))
    vectors: np.ndarray | None = None  # orthonormal null vectors, one per row

    @property
    def dimension(self) -> int:
        return len(self.generators)

    def projection_residual(self, vec: Sequence[complex]) -> float:
        """2-norm distance of a coefficient vector from the null span."""
        if self.vectors is None or self.vectors.size == 0:
            v = np.asarray(vec, dtype=complex)
            return float(np.linalg.norm(v))
        v = np.asarray(vec, dtype=complex)
        coeffs = self.vectors.conj() @ v
        return float(np.linalg.norm(v - self.vectors.T @ coeffs))


def monomials_up_to(degree: int) -> list[Index4]:
    """All 4-variable monomial exponents of total degree <= degree, graded lex."""
    out = []
    for total in range(degree + 1):
        for alpha in itertools.product(range(total + 1), repeat=4):
            if sum(alpha) == total:
                out.append(alpha)
    return out


def _ansatz_unknowns(spec: AnsatzSpec) -> tuple[Unknown, ...]:
    unknowns: list[Unknown] = []
    for a in range(4):
        unknowns.extend(Unknown("xi", a, m) for m in monomials_up_to(spec.degree))
    unknowns.extend(Unknown("eta", -1, m) for m in monomials_up_to(spec.degree))
    unknowns.extend(Unknown("zeta", -1, m) for m in monomials_up_to(spec.zeta_degree))
    return tuple(unknowns)


def _unit_residual(L: LinDiffOp, spec: AnsatzSpec, u: Unknown) -> LinDiffOp:
    """Residual operator contributed by one unit unknown (linearity)."""
    mono = ExpPoly([ExpTerm(1 + 0j, u.alpha)])
    if u.kind == "zeta":
        return -L.premultiply(mono)
    xi = [ExpPoly.zero()] * 4
    eta = ExpPoly.zero()
    if u.kind == "xi":
        xi[u.component] = mono
    else:
        eta = mono
    return ad_power(L, LinDiffOp.first_order(xi, eta), spec.p)


def build_determining_system(L: LinDiffOp, spec: AnsatzSpec) -> DeterminingSystem:
    """Assemble the linear system for  ad_L^p(Q) - zeta L = 0.

    Unknowns are all monomial coefficients of xi^a, eta (degree <= spec.degree)
    and zeta (degree <= spec.zeta_degree); each row equates the coefficient of
    one (monomial x derivative) pair in the residual operator to zero.
    """
    if L.has_exponential_coefficients():
        raise UnsupportedCoefficient(
            "determining systems require polynomial operator coefficients"
        )
    unknowns = _ansatz_unknowns(spec)

    # residual operator for each unit unknown; everything stays polynomial
    columns: list[dict[tuple[Index4, Index4], complex]] = []
    for u in unknowns:
        residual = _unit_residual(L, spec, u)
        entries: dict[tuple[Index4, Index4], complex] = {}
        for delta, coeff in residual.terms:
            for t in coeff.terms:
                entries[(delta, t.alpha)] = entries.get((delta, t.alpha), 0j) + t.coeff
        columns.append(entries)

    row_keys = sorted({key for col in columns for key in col})
    matrix = np.zeros((len(row_keys), len(unknowns)), dtype=complex)
    index = {key: i for i, key in enumerate(row_keys)}
    for j, col in enumerate(columns):
        for key, val in col.items():
            matrix[index[key], j] = val
    return DeterminingSystem(matrix, tuple(unknowns), tuple(row_keys), L, spec)


def solve_null_space(system: DeterminingSystem, tol: float = 1e-8) -> GeneratorBasis:
    """Orthonormal null-space basis of the determining system, decoded.

    Singular values <= tol * sigma_max count as null.  If the spectrum
    clusters across that cutoff (gap ratio below 10) the rank is ambiguous
    and RankDeficiencyAmbiguous is raised instead of silently picking a
    dimension.  Every returned candidate is re-verified through the operator
    algebra.
    """
    m = system.matrix
    if not np.all(np.isfinite(m)):
        raise ValueError("determining system contains non-finite entries")
    n_unknowns = m.shape[1]
    if m.shape[0] == 0:
        sigma = np.zeros(0)
        null_vecs = [np.eye(n_unknowns, dtype=complex)[:, j] for j in range(n_unknowns)]
    else:
        _, sigma, vh = np.linalg.svd(m, full_matrices=True)
        sigma_max = sigma[0] if sigma.size else 0.0
        cutoff = tol * sigma_max
        rank = int(np.sum(sigma > cutoff))
        if 0 < rank < sigma.size and sigma[rank] > 0:
            gap = sigma[rank - 1] / sigma[rank]
            if gap < _GAP_GUARD:
                raise RankDeficiencyAmbiguous(
                    f"singular values {sigma[rank - 1]:.3e} and {sigma[rank]:.3e} "
                    f"straddle the cutoff {cutoff:.3e} with gap ratio {gap:.2f} < {_GAP_GUARD}"
                )
        null_vecs = [np.conj(vh[i]) for i in range(rank, n_unknowns)]

    generators = []
    for vec in null_vecs:
        cand = system.decode(vec)
        check = ad_power(system.L, cand.Q, system.spec.p)
        _, res = residual_vs_multiple(check, system.L, cand.zeta)
        if res > 1e-8:
            raise RuntimeError(
                f"null-space candidate fails re-verification: residual {res:.3e}"
            )
        generators.append(cand)
    vectors = (
        np.vstack(null_vecs) if null_vecs else np.zeros((0, n_unknowns), dtype=complex)
    )
    return GeneratorBasis(tuple(generators), singular_values=sigma, vectors=vectors)


def _first_order_keys(ops: Sequence[LinDiffOp]) -> list[tuple[Index4, Index4]]:
    keys = set()
    for op in ops:
        for delta, coeff in op.terms:
            for t in coeff.terms:
                if any(k != 0 for k in t.kappa):
                    raise ValueError("structure constants require polynomial coefficients")
                keys.add((delta, t.alpha))
    return sorted(keys)


def _vectorize(ops: Sequence[LinDiffOp], keys: list[tuple[Index4, Index4]]) -> np.ndarray:
    index = {k: i for i, k in enumerate(keys)}
    out = np.zeros((len(ops), len(keys)), dtype=complex)
    for i, op in enumerate(ops):
        for delta, coeff in op.terms:
            for t in coeff.terms:
                out[i, index[(delta, t.alpha)]] += t.coeff
    return out


def structure_constants(
    generators: Sequence[SymmetryCandidate], tol: float = 1e-8
) -> GeneratorBasis:
    """Fit C_abg in [Q_a, Q_b] = C_abg Q_g over the given basis.

    Commutators are expanded exactly and regressed onto the stacked
    coefficient vectors of the basis.  The constants are real and
    antisymmetric in (a, b) by construction; a fit residual above tol means
    the set does not close into a Lie algebra and raises NotClosed.
    """
    ops = [g.Q for g in generators]
    for op in ops:
        if op.order > 1:
            raise ValueError("structure constants require first-order generators")
    n = len(ops)
    C = np.zeros((n, n, n))
    if n == 0:
        return GeneratorBasis((), C, 0.0)

    keys = _first_order_keys(ops)
    basis_mat = _vectorize(ops, keys)  # n x K
    if np.linalg.matrix_rank(basis_mat, tol=tol * max(1.0, float(np.abs(basis_mat).max()))) < n:
        raise ValueError("generators are not linearly independent")
    worst = 0.0
    for a in range(n):
        for b in range(a + 1, n):
            bracket = commutator(ops[a], ops[b])
            all_keys = sorted(set(keys) | {
                (d, t.alpha) for d, c in bracket.terms for t in c.terms
            })
            bmat = _vectorize(ops, all_keys)
            target = _vectorize([bracket], all_keys)[0]
            coeffs, *_ = np.linalg.lstsq(bmat.T, target, rcond=None)
            fit = bmat.T @ coeffs
            resid = float(np.max(np.abs(fit - target))) if target.size else 0.0
            resid = max(resid, float(np.max(np.abs(coeffs.imag))) if coeffs.size else 0.0)
            worst = max(worst, resid)
            C[a, b, :] = coeffs.real
            C[b, a, :] = -coeffs.real
    if worst > tol:
        raise NotClosed(f"closure residual {worst:.3e} exceeds {tol:.1e}")
    return GeneratorBasis(tuple(generators), C, worst)


@dataclass(frozen=True, eq=False)
class AffineMap:
    """x' = A x + b on R^4."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        A = np.asarray(self.A, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if A.shape != (4, 4) or b.shape != (4,):
            raise ValueError("AffineMap needs a 4x4 matrix and a 4-vector")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(np.eye(4), np.zeros(4))

    def __call__(self, x: Sequence[float]) -> np.ndarray:
        return self.A @ np.asarray(x, dtype=float) + self.b

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self . other, i.e. x -> self(other(x))."""
        return AffineMap(self.A @ other.A, self.A @ other.b + self.b)

    def inverse(self) -> "AffineMap":
        det = float(np.linalg.det(self.A))
        if abs(det) <= 1e-12:
            raise SingularMap(f"|det A| = {abs(det):.3e} <= 1e-12")
        inv = np.linalg.inv(self.A)
        return AffineMap(inv, -inv @ self.b)

    def approx_eq(self, other: "AffineMap", tol: float = 1e-12) -> bool:
        return (
            float(np.max(np.abs(self.A - other.A))) <= tol
            and float(np.max(np.abs(self.b - other.b))) <= tol
        )


def _expm(M: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring of the Taylor series."""
    M = np.asarray(M, dtype=float)
    norm = float(np.max(np.abs(M))) if M.size else 0.0
    squarings = max(0, int(np.ceil(np.log2(norm / 0.5))) if norm > 0.5 else 0)
    S = M / (2.0 ** squarings)
    out = np.eye(M.shape[0])
    term = np.eye(M.shape[0])
    for k in range(1, 24):
        term = term @ S / k
        out = out + term
        if float(np.max(np.abs(term))) < 1e-18:
            break
    for _ in range(squarings):
        out = out @ out
    return out


def flow(Q: SymmetryCandidate, theta: float) -> AffineMap:
    """Integrate dx'/dtheta = xi(x') exactly for affine xi.

    The affine vector field xi(x) = M x + v exponentiates through the 5x5
    augmented matrix [[M, v], [0, 0]]; flow(Q, 0) is the identity and
    flow(Q, s).flow(Q, t) = flow(Q, s + t).  eta plays no role here.
    """
    M = np.zeros((4, 4))
    v = np.zeros(4)
    for delta, coeff in Q.Q.terms:
        if sum(delta) != 1:
            continue
        a = delta.index(1)
        for t in coeff.terms:
            if any(k != 0 for k in t.kappa) or sum(t.alpha) > 1:
                raise UnsupportedDegree(
                    "flows are implemented for affine generator coefficients only"
                )
            val = complex(t.coeff)
            if abs(val.imag) > 1e-12 * max(1.0, abs(val.real)):
                raise UnsupportedDegree("flow generators must have real coefficients")
            if sum(t.alpha) == 0:
                v[a] += val.real
            else:
                M[a, t.alpha.index(1)] += val.real
    aug = np.zeros((5, 5))
    aug[:4, :4] = M
    aug[:4, 4] = v
    E = _expm(float(theta) * aug)
    return AffineMap(E[:4, :4], E[:4, 4])


def pullback(Lp: LinDiffOp, amap: AffineMap) -> LinDiffOp:
    """Express an operator given in primed coordinates x' = A x + b in
    unprimed ones.

    Characterizing property: pullback(Lp, m).apply(f' o m) = (Lp.apply(f')) o m.
    Derivatives transform with the inverse Jacobian, d'_a = (A^-1)_{ba} d_b;
    coefficients are composed with the map.
    """
    det = float(np.linalg.det(amap.A))
    if abs(det) <= 1e-12:
        raise SingularMap(f"|det A| = {abs(det):.3e} <= 1e-12")
    inv = np.linalg.inv(amap.A)
    # constant-coefficient images sum_b (A^-1)_{ba} d_b of the primed partials
    primed_partials = []
    for a in range(4):
        terms = []
        for bidx in range(4):
            delta = [0, 0, 0, 0]
            delta[bidx] = 1
            terms.append((tuple(delta), ExpPoly.constant(inv[bidx, a])))
        primed_partials.append(LinDiffOp(terms))

    out = LinDiffOp.zero()
    for delta, coeff in Lp.terms:
        piece = LinDiffOp.identity()
        for a in range(4):
            for _ in range(delta[a]):
                piece = primed_partials[a].compose(piece)
        out = out + piece.premultiply(coeff.substitute_affine(amap.A, amap.b))
    return out


def apply_probe_null_dimension(
    L: LinDiffOp,
    spec: AnsatzSpec,
    rng: np.random.Generator,
    n_probes: int = 8,
    n_points: int = 6,
    tol: float = 1e-8,
) -> int:
    """Null-space dimension estimated through the apply route.

    Cross-check for :func:`build_determining_system`: instead of extracting
    operator coefficients, each unit unknown's residual operator is applied to
    random exponential probe functions and sampled at random points.  Both
    routes see the same linear map, so the ranks agree for generic probes.
    """
    unknowns = _ansatz_unknowns(spec)
    probes = []
    for _ in range(n_probes):
        kappa = tuple(
            complex(a, b) for a, b in zip(rng.normal(0, 1, 4), rng.normal(0, 1, 4))
        )
        alpha = tuple(int(v) for v in rng.integers(0, 2, 4))
        probes.append(
            ExpPoly([ExpTerm(1 + 0j, alpha, kappa), ExpTerm(0.5 + 0j, ZERO_ALPHA, kappa)])
        )
    points = rng.uniform(-1.0, 1.0, size=(n_points, 4))

    matrix = np.zeros((n_probes * n_points, len(unknowns)), dtype=complex)
    for j, u in enumerate(unknowns):
        op = _unit_residual(L, spec, u)
        row = 0
        for f in probes:
            g = op.apply(f)
            for x in points:
                matrix[row, j] = g.evaluate(tuple(x))
                row += 1
    scale = float(np.abs(matrix).max()) or 1.0
    rank = int(np.linalg.matrix_rank(matrix, tol=tol * scale))
    return len(unknowns) - rank
