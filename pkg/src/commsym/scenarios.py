"""Built-in verification suites for the wave, Schrodinger and Maxwell systems.

Each suite constructs concrete operators, exact solutions and weight
functions, runs a fixed list of named identity checks, and returns a
:class:`ScenarioReport` with one residual per check.  Check names carry a
catalog label (``eq14`` ... ``eq31``) identifying the verified identity; the
labels are stable API and are documented in the README.

Coordinate conventions: functions always live on (x0, x1, x2, x3).  The wave
and Maxwell suites read x0 = c*t; the Schrodinger suite reads x0 = t.  All
index lowering has been folded into explicit signs, so every formula here is
written in upper-index coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .detsolve import AffineMap
from .expcore import ExpPoly
from .opalg import LinDiffOp, MatrixDiffOp, ad_power, residual_vs_multiple

# engaging-check pass thresholds, per scenario
DALEMBERT_ENGAGING_TOL = 1e-9
SCHRODINGER_ENGAGING_TOL = 1e-8
MAXWELL_ENGAGING_TOL = 1e-9
COMPOSITION_TOL = 1e-10
IDENTITY_TOL = 1e-12
LIMIT_TOL = 1e-10
SCALING_TOL = 0.2  # |ratio - 2| bound for the halving checks
LIMIT_BETAS = (1e-2, 5e-3, 2.5e-3)

_SQRT2 = math.sqrt(2.0)


class InvalidParams(ValueError):
    """Scenario parameters violate a validity guard."""


class DegenerateDirection(InvalidParams):
    """|n_x| too close to 1: the field-transform parameters are singular."""


class NotSingleExponential(ValueError):
    """Weight inference needs single-term pure exponentials."""


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class CheckResult:
    name: str
    paper_ref: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


@dataclass(frozen=True)
class ScenarioReport:
    scenario: str
    params: dict
    checks: tuple[CheckResult, ...]
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _check(name: str, ref: str, residual: float, tol: float) -> CheckResult:
    return CheckResult(name, ref, float(residual), float(tol))


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class DalembertParams:
    """Boost parameters for the wave-equation suites.

    beta is the frame velocity over c, n the unit propagation direction
    (guiding cosines), omega the frequency, c the wave speed.  lam is the
    derived frame ratio c'/c = sqrt(1 - 2 beta n_x + beta^2).
    """

    beta: float
    n: tuple[float, float, float] = (0.0, 1.0, 0.0)
    omega: float = 1.0
    c: float = 1.0

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.beta, self.omega, self.c, *self.n)):
            raise InvalidParams("parameters must be finite")
        if abs(self.beta) >= 1.0:
            raise InvalidParams(f"|beta| = {abs(self.beta)} must be < 1")
        if self.omega <= 0 or self.c <= 0:
            raise InvalidParams("omega and c must be positive")
        norm = math.sqrt(sum(v * v for v in self.n))
        if norm == 0:
            raise InvalidParams("n must be a nonzero direction")
        object.__setattr__(self, "n", tuple(v / norm for v in self.n))
        if self.lam <= 1e-9:
            raise InvalidParams("frame ratio lambda vanishes for these parameters")

    @property
    def lam(self) -> float:
        nx = self.n[0]
        return math.sqrt(1.0 - 2.0 * self.beta * nx + self.beta * self.beta)

    def as_dict(self) -> dict:
        return {
            "beta": self.beta,
            "n_x": self.n[0],
            "n_y": self.n[1],
            "n_z": self.n[2],
            "omega": self.omega,
            "c": self.c,
            "lambda": self.lam,
        }


@dataclass(frozen=True)
class SchrodingerParams:
    """Boost and particle parameters for the Schrodinger suite.

    V is the frame velocity along x1, v the particle velocity; W = m c^2 with
    the velocity-dependent mass m = m0 / sqrt(1 - |v|^2/c^2).  beta_v_prime
    is the boosted particle speed over c (velocity-addition form).
    """

    V: float = 0.2
    v: tuple[float, float, float] = (0.4, 0.0, 0.0)
    c: float = 1.0
    hbar: float = 1.0
    m0: float = 1.0

    def __post_init__(self) -> None:
        if self.c <= 0 or self.hbar <= 0 or self.m0 <= 0:
            raise InvalidParams("c, hbar, m0 must be positive")
        if abs(self.V) >= self.c:
            raise InvalidParams("|V| must be below c")
        vmag = math.sqrt(sum(u * u for u in self.v))
        if vmag >= self.c:
            raise InvalidParams("|v| must be below c")
        if vmag == 0:
            raise InvalidParams("a nonzero particle velocity is required")

    @property
    def beta(self) -> float:
        return self.V / self.c

    @property
    def beta_vec(self) -> tuple[float, float, float]:
        return tuple(u / self.c for u in self.v)

    @property
    def beta_v(self) -> float:
        return math.sqrt(sum(u * u for u in self.beta_vec))

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.beta**2)

    @property
    def m(self) -> float:
        return self.m0 / math.sqrt(1.0 - self.beta_v**2)

    @property
    def W(self) -> float:
        return self.m * self.c**2

    @property
    def P(self) -> tuple[float, float, float]:
        return tuple(self.m * u for u in self.v)

    @property
    def beta_v_prime(self) -> float:
        b, bv = self.beta, self.beta_v
        bx = self.beta_vec[0]
        num = b * b * (1 - bv * bv) + bv * bv - 2 * b * bx + b * b * bx * bx
        return math.sqrt(num) / (1 - b * bx)

    def as_dict(self) -> dict:
        return {
            "V": self.V,
            "v_x": self.v[0],
            "v_y": self.v[1],
            "v_z": self.v[2],
            "c": self.c,
            "hbar": self.hbar,
            "m0": self.m0,
            "W": self.W,
            "beta_v_prime": self.beta_v_prime,
        }


@dataclass(frozen=True)
class MaxwellTransform:
    """Field-transform data: amplitude parameter kappa, mixing parameters
    e23, e32, h23, h32 (all expressible through the common d = e23), and the
    scalar weight function phi_D."""

    kappa: float
    e23: float
    e32: float
    h23: float
    h32: float
    d: float
    phi_D: ExpPoly

    @classmethod
    def from_params(cls, p: DalembertParams) -> "MaxwellTransform":
        nx = p.n[0]
        if abs(nx) >= 1.0 - 1e-6:
            raise DegenerateDirection(
                f"|n_x| = {abs(nx):.8f} too close to 1; transform parameters singular"
            )
        lam = p.lam
        kappa = (nx * (p.beta - nx) + lam) / (1.0 - nx * nx)
        e23 = (nx * (lam - 1.0) + p.beta) / (nx * (p.beta - nx) + lam)
        h23 = -(nx * (lam - 1.0) + p.beta) / (nx * (p.beta - nx) + lam)
        return cls(
            kappa=kappa,
            e23=e23,
            e32=-e23,
            h23=h23,
            h32=e23,
            d=e23,
            phi_D=dalembert_weight(p),
        )


# ---------------------------------------------------------------------------
# wave-equation building blocks (x0 = c t)


def wave_operator() -> LinDiffOp:
    """The d'Alembertian d0^2 - d1^2 - d2^2 - d3^2."""
    return (
        LinDiffOp.partial(0, 2)
        - LinDiffOp.partial(1, 2)
        - LinDiffOp.partial(2, 2)
        - LinDiffOp.partial(3, 2)
    )


def laplacian() -> LinDiffOp:
    return LinDiffOp.partial(1, 2) + LinDiffOp.partial(2, 2) + LinDiffOp.partial(3, 2)


def h1_generator() -> LinDiffOp:
    """H1 = x0 d1, the shear generating the Galilei boost."""
    return LinDiffOp([((0, 1, 0, 0), ExpPoly.coordinate(0))])


def boost_generator() -> LinDiffOp:
    """M01 = x0 d1 + x1 d0 in upper-index coordinates (cosh/sinh flow)."""
    return LinDiffOp(
        [((0, 1, 0, 0), ExpPoly.coordinate(0)), ((1, 0, 0, 0), ExpPoly.coordinate(1))]
    )


def plane_wave(p: DalembertParams) -> ExpPoly:
    """exp(-i k.x) with k.x = omega (t - n.x/c), written on x0 = c t."""
    w = p.omega / p.c
    kappa = (-1j * w, 1j * w * p.n[0], 1j * w * p.n[1], 1j * w * p.n[2])
    return ExpPoly.exponential(1.0, kappa)


def dalembert_weight(p: DalembertParams) -> ExpPoly:
    """The scalar boost weight, a single exponential.

    Exponent: -(i/lam) [ (1-lam) k.x - beta omega (n_x t - x1/c) ] with
    k.x = omega(t - n.x/c), rewritten on x0 = c t.
    """
    lam, w = p.lam, p.omega / p.c
    nx, ny, nz = p.n
    k0 = -1j * w / lam * ((1.0 - lam) - p.beta * nx)
    k1 = 1j * w / lam * ((1.0 - lam) * nx - p.beta)
    k2 = 1j * w / lam * (1.0 - lam) * ny
    k3 = 1j * w / lam * (1.0 - lam) * nz
    return ExpPoly.exponential(1.0, (k0, k1, k2, k3))


def galilei_map(p: DalembertParams) -> AffineMap:
    """t' = t, x1' = x1 - beta x0, with the primed time axis scaled by
    c' = lam c (so x0' = lam x0)."""
    A = np.eye(4)
    A[0, 0] = p.lam
    A[1, 0] = -p.beta
    return AffineMap(A, np.zeros(4))


def dalembert_engaging_operator(p: DalembertParams) -> LinDiffOp:
    """(d0 + beta d1)^2 / lam^2 - laplacian: the boosted wave operator."""
    d = LinDiffOp.partial(0) + p.beta * LinDiffOp.partial(1)
    return (1.0 / p.lam**2) * d.compose(d) - laplacian()


def boosted_wave_params(p: DalembertParams) -> DalembertParams:
    """(omega', n', c') of the wave as seen from the boosted frame."""
    lam = p.lam
    n_prime = ((p.n[0] - p.beta) / lam, p.n[1] / lam, p.n[2] / lam)
    return DalembertParams(beta=0.0, n=n_prime, omega=lam * p.omega, c=lam * p.c)


def infer_weight(phi_primed: ExpPoly, amap: AffineMap, phi: ExpPoly) -> ExpPoly:
    """Recover the weight Phi(x) = phi_primed(amap(x)) / phi(x).

    Both inputs must be single-term pure exponentials; the quotient is then
    again a single exponential, computed exactly on covectors.
    """
    for f, label in ((phi_primed, "phi_primed"), (phi, "phi")):
        if len(f.terms) != 1 or sum(f.terms[0].alpha) != 0:
            raise NotSingleExponential(f"{label} is not a single pure exponential")
    tp, t = phi_primed.terms[0], phi.terms[0]
    pulled = phi_primed.substitute_affine(amap.A, amap.b).terms[0]
    kappa = tuple(kp - k for kp, k in zip(pulled.kappa, t.kappa))
    return ExpPoly.exponential(pulled.coeff / t.coeff, kappa)


# deterministic sample points in the unit 4-ball, used by the sup-norm limits
def _ball_points(count: int = 48, seed: int = 12345) -> np.ndarray:
    rng = np.random.default_rng(seed)
    u = rng.normal(size=(count, 4))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    r = rng.uniform(0, 1, size=(count, 1)) ** 0.25
    return u * r


_BALL = _ball_points()


def _sup_on_ball(f: ExpPoly) -> float:
    return max(abs(f.evaluate(tuple(x))) for x in _BALL)


def _halving_ratio_residual(dev) -> float:
    """max |dev(b)/dev(b/2) - 2| over the standard beta triple.

    dev: callable beta -> non-negative deviation, expected linear in beta.
    """
    values = [dev(b) for b in LIMIT_BETAS]
    worst = 0.0
    for big, small in zip(values, values[1:]):
        if big < 1e-14 and small < 1e-14:
            continue  # identically zero: linear scaling holds trivially
        worst = max(worst, abs(big / small - 2.0))
    return worst


# ---------------------------------------------------------------------------
# wave-equation suite


def run_dalembert(
    p: DalembertParams, residual_tol: float | None = None
) -> ScenarioReport:
    """Verify the Galilei-boost identities of the wave equation."""
    engaging_tol = DALEMBERT_ENGAGING_TOL if residual_tol is None else residual_tol
    box = wave_operator()
    phi = plane_wave(p)
    weight = dalembert_weight(p)
    weighted = weight * phi
    checks = []

    checks.append(
        _check("eq16_ad2_H1", "eq16", ad_power(box, h1_generator(), 2).max_coeff(), IDENTITY_TOL)
    )
    checks.append(
        _check("eq15_wave_on_shell", "eq14,eq15", box.apply(phi).max_coeff(), IDENTITY_TOL)
    )
    checks.append(
        _check(
            "eq17_engaging_weighted_wave",
            "eq17,eq18",
            dalembert_engaging_operator(p).apply(weighted).max_coeff(),
            engaging_tol,
        )
    )

    # the weighted wave must itself be one pure exponential
    single_defect = 0.0
    if len(weighted.terms) != 1 or sum(weighted.terms[0].alpha) != 0:
        single_defect = weighted.max_coeff() or 1.0
    checks.append(
        _check("eq19_weighted_wave_single_exponential", "eq19", single_defect, IDENTITY_TOL)
    )

    # round trip: the weight inferred from the boosted plane wave matches
    primed = plane_wave(boosted_wave_params(p))
    inferred = infer_weight(primed, galilei_map(p), phi)
    checks.append(
        _check(
            "eq19_primed_covector_match",
            "eq13,eq18,eq19",
            (inferred - weight).max_coeff(),
            1e-10,
        )
    )

    def weight_deviation(beta: float) -> float:
        q = DalembertParams(beta=beta, n=p.n, omega=p.omega, c=p.c)
        return _sup_on_ball(dalembert_weight(q) - ExpPoly.constant(1))

    checks.append(
        _check(
            "eq18_weight_limit_linear_scaling",
            "eq18 limit",
            _halving_ratio_residual(weight_deviation),
            SCALING_TOL,
        )
    )

    return ScenarioReport("dalembert-galilei", p.as_dict(), tuple(checks))


# ---------------------------------------------------------------------------
# Schrodinger building blocks (x0 = t)


def schrodinger_operator(p: SchrodingerParams) -> LinDiffOp:
    """i hbar d_t + (c^2 hbar^2 / 2W) laplacian, with W = m c^2."""
    coeff = p.c**2 * p.hbar**2 / (2.0 * p.W)
    return (1j * p.hbar) * LinDiffOp.partial(0) + coeff * laplacian()


def psi1(p: SchrodingerParams) -> ExpPoly:
    """exp[-(i/hbar)((beta_v^2/2) W t - P.x)]."""
    k0 = -1j / p.hbar * (p.beta_v**2 / 2.0) * p.W
    ks = tuple(1j / p.hbar * pc for pc in p.P)
    return ExpPoly.exponential(1.0, (k0, *ks))


def psi2(p: SchrodingerParams) -> ExpPoly:
    """exp[-(i/hbar)(W t - sqrt(2) P.x / beta_v)]."""
    k0 = -1j / p.hbar * p.W
    ks = tuple(1j / p.hbar * _SQRT2 * pc / p.beta_v for pc in p.P)
    return ExpPoly.exponential(1.0, (k0, *ks))


def schrodinger_engaging_operator(p: SchrodingerParams) -> LinDiffOp:
    """The boosted Schrodinger operator, transcribed term by term:

    i hbar (d_t + V d_x)
      + [c^2 hbar^2 (1 - V^2/c^2) / (2 W (1 - V v_x / c^2))]
        * [ (d_x + V d_t / c^2)^2 / (1 - V^2/c^2) + d_yy + d_zz ]
    """
    b2 = p.beta**2
    denom = 1.0 - p.V * p.v[0] / p.c**2
    first = (1j * p.hbar) * (LinDiffOp.partial(0) + p.V * LinDiffOp.partial(1))
    mixed = LinDiffOp.partial(1) + (p.V / p.c**2) * LinDiffOp.partial(0)
    bracket = (1.0 / (1.0 - b2)) * mixed.compose(mixed) + LinDiffOp.partial(2, 2) + LinDiffOp.partial(3, 2)
    pref = p.c**2 * p.hbar**2 * (1.0 - b2) / (2.0 * p.W * denom)
    return first + pref * bracket


def psi11_weight(p: SchrodingerParams) -> ExpPoly:
    """The closed-form weight for psi1, transcribed verbatim."""
    b, bx = p.beta, p.beta_vec[0]
    bv, bvp = p.beta_v, p.beta_v_prime
    pref = -1j * p.W / (2.0 * p.hbar * (1.0 - b * b))
    k0 = pref * (bvp**2 - 2 * b * b - bv * bv * (1 - b * b) - b * bx * (bvp**2 - 2))
    k1 = pref * (-(bvp**2 - 2) * (b - b * b * bx)) / p.c
    return ExpPoly.exponential(1.0, (k0, k1, 0j, 0j))


def psi22_weight_printed(p: SchrodingerParams) -> ExpPoly:
    """The closed-form weight for psi2, transcribed verbatim.

    This expression is reproduced exactly as catalogued; its engaging residual
    is reported as measured (check eq23_engaging_psi22_as_printed) rather
    than corrected.  See psi22_weight_via_transform for the reconstruction.
    """
    b, bx, by, bz = p.beta, *p.beta_vec
    bv, bvp = p.beta_v, p.beta_v_prime
    pref = -1j * p.W / (2.0 * p.hbar * (1.0 - b * b))
    gap = 1.0 / bv - 1.0 / bvp
    k0 = pref * (1 - _SQRT2 / bvp) * (b * b - b * bx)
    k1 = pref * ((1 - _SQRT2 / bvp) * (b * b * bx - b) + _SQRT2 * bx * gap) / p.c
    k2 = pref * _SQRT2 * (1 - b * b) * gap * by / p.c
    k3 = pref * _SQRT2 * (1 - b * b) * gap * bz / p.c
    return ExpPoly.exponential(1.0, (k0, k1, k2, k3))


def lorentz_map(p: SchrodingerParams) -> AffineMap:
    """t' = gamma (t - V x/c^2), x' = gamma (x - V t) on (x0=t, x1, x2, x3)."""
    g, V, c = p.gamma, p.V, p.c
    A = np.eye(4)
    A[0, 0] = g
    A[0, 1] = -g * V / c**2
    A[1, 0] = -g * V
    A[1, 1] = g
    return AffineMap(A, np.zeros(4))


def boosted_particle(p: SchrodingerParams) -> SchrodingerParams:
    """Particle parameters in the boosted frame (velocity addition)."""
    denom = 1.0 - p.V * p.v[0] / p.c**2
    vpx = (p.v[0] - p.V) / denom
    vpy = p.v[1] / (p.gamma * denom)
    vpz = p.v[2] / (p.gamma * denom)
    return SchrodingerParams(V=0.0, v=(vpx, vpy, vpz), c=p.c, hbar=p.hbar, m0=p.m0)


def psi_weight_via_transform(p: SchrodingerParams, which: int) -> ExpPoly:
    """Weight reconstructed as (boosted solution o lorentz map) / solution."""
    q = boosted_particle(p)
    if which == 1:
        return infer_weight(psi1(q), lorentz_map(p), psi1(p))
    if which == 2:
        return infer_weight(psi2(q), lorentz_map(p), psi2(p))
    raise ValueError("which must be 1 or 2")


def nonrel_schrodinger_operator(p: SchrodingerParams) -> LinDiffOp:
    """i hbar d_t + (hbar^2 / 2 m0) laplacian."""
    return (1j * p.hbar) * LinDiffOp.partial(0) + (p.hbar**2 / (2 * p.m0)) * laplacian()


def psi1_nonrel_limit(p: SchrodingerParams) -> ExpPoly:
    """exp[-i(E t - p.x)/hbar] with E = m0 v^2/2, p = m0 v."""
    vsq = sum(u * u for u in p.v)
    k0 = -1j / p.hbar * (p.m0 * vsq / 2.0)
    ks = tuple(1j / p.hbar * p.m0 * u for u in p.v)
    return ExpPoly.exponential(1.0, (k0, *ks))


def psi2_nonrel_limit(p: SchrodingerParams) -> ExpPoly:
    """exp[-i(m0 c^2/hbar)(t - sqrt(2) s.x / c)] with s = v/|v|."""
    vmag = math.sqrt(sum(u * u for u in p.v))
    s = tuple(u / vmag for u in p.v)
    k0 = -1j * p.m0 * p.c**2 / p.hbar
    ks = tuple(1j * p.m0 * p.c * _SQRT2 * sc / p.hbar for sc in s)
    return ExpPoly.exponential(1.0, (k0, *ks))


def run_schrodinger(
    p: SchrodingerParams, residual_tol: float | None = None
) -> ScenarioReport:
    """Verify the Lorentz-boost identities of the Schrodinger operator.

    The catalogued closed form for the psi2 weight does not satisfy the
    engaging identity (the residual is far above rounding); the suite reports
    that check as measured and verifies the transform-reconstructed weight
    alongside it.
    """
    engaging_tol = SCHRODINGER_ENGAGING_TOL if residual_tol is None else residual_tol
    ls = schrodinger_operator(p)
    s1, s2 = psi1(p), psi2(p)
    engaging = schrodinger_engaging_operator(p)
    w11 = psi11_weight(p)
    w22_printed = psi22_weight_printed(p)
    w11_via = psi_weight_via_transform(p, 1)
    w22_via = psi_weight_via_transform(p, 2)
    checks = []

    checks.append(_check("eq21_dispersion_psi1", "eq20,eq21", ls.apply(s1).max_coeff(), IDENTITY_TOL))
    checks.append(_check("eq21_dispersion_psi2", "eq20,eq21", ls.apply(s2).max_coeff(), IDENTITY_TOL))
    checks.append(
        _check("eq22_ad2_M01", "eq22", ad_power(ls, boost_generator(), 2).max_coeff(), IDENTITY_TOL)
    )
    checks.append(
        _check(
            "eq23_engaging_psi11",
            "eq23,eq24",
            engaging.apply(w11 * s1).max_coeff(),
            engaging_tol,
        )
    )
    checks.append(
        _check(
            "eq23_engaging_psi22_as_printed",
            "eq23,eq24",
            engaging.apply(w22_printed * s2).max_coeff(),
            engaging_tol,
        )
    )
    checks.append(
        _check(
            "eq23_engaging_psi22_via_transform",
            "eq13,eq23",
            engaging.apply(w22_via * s2).max_coeff(),
            engaging_tol,
        )
    )

    # cross weights are defined by covector arithmetic; both routes must agree
    w12 = _exp_quotient(w11 * s1, s2)
    w21 = _exp_quotient(w22_printed * s2, s1)
    checks.append(
        _check("eq24_cross_weight_psi12", "eq24,eq25", (w12 * s2 - w11 * s1).max_coeff(), IDENTITY_TOL)
    )
    checks.append(
        _check(
            "eq24_cross_weight_psi21",
            "eq24,eq25",
            (w21 * s1 - w22_printed * s2).max_coeff(),
            IDENTITY_TOL,
        )
    )

    limit_op = nonrel_schrodinger_operator(p)
    checks.append(
        _check(
            "eq20_nonrel_limit_psi1",
            "eq20 limit",
            limit_op.apply(psi1_nonrel_limit(p)).max_coeff(),
            LIMIT_TOL,
        )
    )
    checks.append(
        _check(
            "eq21_nonrel_limit_psi2",
            "eq21 limit",
            limit_op.apply(psi2_nonrel_limit(p)).max_coeff(),
            LIMIT_TOL,
        )
    )

    info = {
        "psi11_printed_vs_transform_covector_gap": _covector_gap(w11, w11_via),
        "psi22_printed_vs_transform_covector_gap": _covector_gap(w22_printed, w22_via),
    }
    return ScenarioReport("schrodinger-lorentz", p.as_dict(), tuple(checks), info)


def _exp_quotient(num: ExpPoly, den: ExpPoly) -> ExpPoly:
    """Quotient of two single pure exponentials, exact on covectors."""
    for f, label in ((num, "numerator"), (den, "denominator")):
        if len(f.terms) != 1 or sum(f.terms[0].alpha) != 0:
            raise NotSingleExponential(f"{label} is not a single pure exponential")
    tn, td = num.terms[0], den.terms[0]
    return ExpPoly.exponential(
        tn.coeff / td.coeff, tuple(a - b for a, b in zip(tn.kappa, td.kappa))
    )


def _covector_gap(a: ExpPoly, b: ExpPoly) -> float:
    ta, tb = a.terms[0], b.terms[0]
    return max(
        max(abs(x - y) for x, y in zip(ta.kappa, tb.kappa)), abs(ta.coeff - tb.coeff)
    )


# ---------------------------------------------------------------------------
# Maxwell building blocks (x0 = c t)


def maxwell_operator(time_op: LinDiffOp | None = None) -> MatrixDiffOp:
    """The free Maxwell system as an 8x6 first-order operator.

    Row order: div E; (curl H - T E)_xyz; div H; (curl E + T H)_xyz, acting on
    fields (E1, E2, E3, H1, H2, H3).  T defaults to d0 (i.e. (1/c) d_t on
    x0 = c t); the boosted system passes T = (d0 + beta d1)/lam instead.
    """
    T = LinDiffOp.partial(0) if time_op is None else time_op
    z = LinDiffOp.zero()
    d1, d2, d3 = (LinDiffOp.partial(a) for a in (1, 2, 3))
    mT = -1.0 * T
    rows = [
        [d1, d2, d3, z, z, z],
        [mT, z, z, z, -1.0 * d3, d2],
        [z, mT, z, d3, z, -1.0 * d1],
        [z, z, mT, -1.0 * d2, d1, z],
        [z, z, z, d1, d2, d3],
        [z, -1.0 * d3, d2, T, z, z],
        [d3, z, -1.0 * d1, z, T, z],
        [-1.0 * d2, d1, z, z, z, T],
    ]
    return MatrixDiffOp(rows)


MAXWELL_ROW_NAMES = (
    "div_e",
    "ampere_x",
    "ampere_y",
    "ampere_z",
    "div_h",
    "faraday_x",
    "faraday_y",
    "faraday_z",
)


def maxwell_primed_operator(p: DalembertParams) -> MatrixDiffOp:
    """Boosted system: spatial rows unchanged, time derivative replaced by
    (d0 + beta d1)/lam (the map t'=t, x'=x-Vt with c' = lam c)."""
    T = (1.0 / p.lam) * (LinDiffOp.partial(0) + p.beta * LinDiffOp.partial(1))
    return maxwell_operator(T)


def polarization(p: DalembertParams, angle: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """A transverse polarization pair (l, m = n x l), rotated by angle about n."""
    n = np.array(p.n)
    ref = np.zeros(3)
    ref[int(np.argmin(np.abs(n)))] = 1.0
    l0 = ref - (ref @ n) * n
    l0 /= np.linalg.norm(l0)
    l = math.cos(angle) * l0 + math.sin(angle) * np.cross(n, l0)
    return l, np.cross(n, l)


def plane_fields(p: DalembertParams, l: Sequence[float], m: Sequence[float]) -> list[ExpPoly]:
    """(E, H) = (l, m) exp(-i k.x) as six component functions."""
    phi = plane_wave(p)
    return [float(a) * phi for a in (*l, *m)]


def transform_fields(fields: Sequence[ExpPoly], t: MaxwellTransform) -> list[ExpPoly]:
    """Apply the boost field map to (E1, E2, E3, H1, H2, H3)."""
    e1, e2, e3, h1, h2, h3 = fields
    w, k = t.phi_D, t.kappa
    return [
        w * e1,
        k * (w * (e2 + t.h23 * h3)),
        k * (w * (e3 + t.h32 * h2)),
        w * h1,
        k * (w * (h2 + t.e23 * e3)),
        k * (w * (h3 + t.e32 * e2)),
    ]


def _dot(fields_a: Sequence[ExpPoly], fields_b: Sequence[ExpPoly]) -> ExpPoly:
    acc = ExpPoly.zero()
    for a, b in zip(fields_a, fields_b):
        acc = acc + a * b
    return acc


def run_maxwell(
    p: DalembertParams, residual_tol: float | None = None, angle: float = 0.0
) -> ScenarioReport:
    """Verify the Galilei-boost identities of the free Maxwell system."""
    engaging_tol = MAXWELL_ENGAGING_TOL if residual_tol is None else residual_tol
    transform = MaxwellTransform.from_params(p)  # raises DegenerateDirection
    l, m = polarization(p, angle)
    fields = plane_fields(p, l, m)
    checks = []

    onshell = maxwell_operator().apply(fields)
    checks.append(
        _check(
            "eq27_wave_solves_maxwell",
            "eq26,eq27",
            max(r.max_coeff() for r in onshell),
            IDENTITY_TOL,
        )
    )

    sign_defect = max(
        abs(transform.e32 + transform.e23),
        abs(transform.h32 - transform.e23),
        abs(transform.h23 + transform.e23),
        abs(transform.d - transform.e23),
    )
    checks.append(_check("eq29_sign_relations", "eq29", sign_defect, IDENTITY_TOL))

    primed_fields = transform_fields(fields, transform)
    primed_rows = maxwell_primed_operator(p).apply(primed_fields)
    for name, row in zip(MAXWELL_ROW_NAMES, primed_rows):
        checks.append(
            _check(f"eq26_engaging_{name}", "eq26,eq28,eq29", row.max_coeff(), engaging_tol)
        )

    e_p, h_p = primed_fields[:3], primed_fields[3:]
    checks.append(
        _check("eq28_invariant_e_dot_h", "eq28", _dot(e_p, h_p).max_coeff(), IDENTITY_TOL)
    )
    checks.append(
        _check(
            "eq28_invariant_e2_minus_h2",
            "eq28",
            (_dot(e_p, e_p) - _dot(h_p, h_p)).max_coeff(),
            IDENTITY_TOL,
        )
    )

    def field_deviation(beta: float) -> float:
        q = DalembertParams(beta=beta, n=p.n, omega=p.omega, c=p.c)
        tq = MaxwellTransform.from_params(q)
        f = plane_fields(q, l, m)
        fp = transform_fields(f, tq)
        e, h = f[:3], f[3:]
        # boost velocity is (beta, 0, 0): beta x H = (0, -beta H3, beta H2)
        expect = [
            e[0],
            e[1] - beta * h[2],
            e[2] + beta * h[1],
            h[0],
            h[1] + beta * e[2],
            h[2] - beta * e[1],
        ]
        return max(_sup_on_ball(a - b) for a, b in zip(fp, expect))

    checks.append(
        _check(
            "eq28_nonrel_field_limit_scaling",
            "eq28 limit",
            _halving_ratio_residual(field_deviation),
            SCALING_TOL,
        )
    )

    # informational: the quadratic forms compared off shell (arbitrary
    # amplitudes, no transversality), against the kappa^2 Phi^2 scaling
    off = [float(a) * plane_wave(p) for a in (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)]
    off_p = transform_fields(off, transform)
    scale = transform.kappa**2 * transform.phi_D * transform.phi_D
    info = {
        "offshell_e_dot_h_gap_vs_kappa2": (
            _dot(off_p[:3], off_p[3:]) - scale * _dot(off[:3], off[3:])
        ).max_coeff(),
        "offshell_e2_minus_h2_gap_vs_kappa2": (
            (_dot(off_p[:3], off_p[:3]) - _dot(off_p[3:], off_p[3:]))
            - scale * (_dot(off[:3], off[:3]) - _dot(off[3:], off[3:]))
        ).max_coeff(),
    }

    params = p.as_dict()
    params.update(
        {
            "kappa_param": transform.kappa,
            "e23": transform.e23,
            "h23": transform.h23,
            "d": transform.d,
            "polarization_angle": angle,
        }
    )
    return ScenarioReport("maxwell-galilei", params, tuple(checks), info)


# ---------------------------------------------------------------------------
# composition of two boosts


def boosted_params(p: DalembertParams, beta2: float) -> DalembertParams:
    """The second boost's parameters, expressed in the boosted frame."""
    lam = p.lam
    n_prime = ((p.n[0] - p.beta) / lam, p.n[1] / lam, p.n[2] / lam)
    return DalembertParams(beta=beta2, n=n_prime, omega=lam * p.omega, c=lam * p.c)


def check_composition(
    p1: DalembertParams, p2: DalembertParams, residual_tol: float | None = None
) -> ScenarioReport:
    """Verify the composition laws for two successive boosts.

    p1 describes the first boost (frame K to K'); p2 the second (K' to K''),
    expressed in K' coordinates, so p2.n must equal the transformed direction
    and (p2.omega, p2.c) the transformed frequency and speed.
    """
    law_tol = COMPOSITION_TOL if residual_tol is None else residual_tol
    expected = boosted_params(p1, p2.beta)
    mismatch = max(
        max(abs(a - b) for a, b in zip(p2.n, expected.n)),
        abs(p2.omega - expected.omega),
        abs(p2.c - expected.c),
    )
    if mismatch > 1e-9:
        raise InvalidParams(
            "second-frame parameters are inconsistent with the first boost "
            f"(max mismatch {mismatch:.3e}); build them with boosted_params()"
        )

    combined = DalembertParams(
        beta=p1.beta + p1.lam * p2.beta, n=p1.n, omega=p1.omega, c=p1.c
    )
    t1 = MaxwellTransform.from_params(p1)
    t2 = MaxwellTransform.from_params(p2)
    t12 = MaxwellTransform.from_params(combined)
    checks = []

    w2_pulled = t2.phi_D.substitute_affine(galilei_map(p1).A, galilei_map(p1).b)
    checks.append(
        _check(
            "eq30_weight_composition",
            "eq30",
            (t12.phi_D - w2_pulled * t1.phi_D).max_coeff(),
            law_tol,
        )
    )
    checks.append(
        _check(
            "eq30_d_composition",
            "eq30",
            abs(t12.d - (t2.d + t1.d) / (1.0 + t2.d * t1.d)),
            law_tol,
        )
    )
    checks.append(
        _check(
            "eq30_kappa_composition",
            "eq30",
            abs(t12.kappa - t2.kappa * t1.kappa * (1.0 + t2.d * t1.d)),
            law_tol,
        )
    )

    params = p1.as_dict()
    params.update({"beta2": p2.beta, "beta_combined": combined.beta})
    return ScenarioReport("composition", params, tuple(checks))


def compose_d_parameters(d1: float, d2: float) -> float:
    """The scalar composition law d'' = (d' + d)/(1 + d'd)."""
    return (d2 + d1) / (1.0 + d2 * d1)


# ---------------------------------------------------------------------------
# full linear-group sweep


def run_igl_sweep(schrod: SchrodingerParams | None = None) -> ScenarioReport:
    """All 40 commutator identities behind the maximal linear symmetry group:
    translations at order 1 and the 16 linear generators x^a d_b at order 2,
    against both the wave and the Schrodinger operator."""
    schrod = schrod or SchrodingerParams()
    operators = (("box", wave_operator()), ("schrod", schrodinger_operator(schrod)))
    checks = []
    for op_name, L in operators:
        for a in range(4):
            res = ad_power(L, LinDiffOp.partial(a), 1).max_coeff()
            checks.append(_check(f"eq31_{op_name}_p{a}", "eq31", res, IDENTITY_TOL))
        for a in range(4):
            for b in range(4):
                g = LinDiffOp([(tuple(1 if i == b else 0 for i in range(4)), ExpPoly.coordinate(a))])
                res = ad_power(L, g, 2).max_coeff()
                checks.append(_check(f"eq31_{op_name}_g{a}{b}", "eq31", res, IDENTITY_TOL))
    return ScenarioReport("igl-sweep", {"W": schrod.W}, tuple(checks))


# ---------------------------------------------------------------------------
# generator search


def igl_generator_vectors(system) -> dict[str, np.ndarray]:
    """Encodings of the 20 linear-group generators over a system's unknowns:
    the four translations d_a and the sixteen maps x^a d_b."""
    index = {(u.kind, u.component, u.alpha): i for i, u in enumerate(system.unknowns)}
    out: dict[str, np.ndarray] = {}
    zero_a = (0, 0, 0, 0)
    for a in range(4):
        v = np.zeros(len(system.unknowns), dtype=complex)
        v[index[("xi", a, zero_a)]] = 1.0
        out[f"p{a}"] = v
    for a in range(4):
        mono = tuple(1 if i == a else 0 for i in range(4))
        for b in range(4):
            v = np.zeros(len(system.unknowns), dtype=complex)
            v[index[("xi", b, mono)]] = 1.0
            out[f"g{a}{b}"] = v
    return out


def run_generator_search(
    operator: str = "box",
    degree: int = 1,
    p: int = 2,
    zeta_degree: int = 0,
    seed: int = 0,
    schrod: SchrodingerParams | None = None,
) -> ScenarioReport:
    """Rediscover symmetry generators from the determining system and verify
    the result against independent observables."""
    from . import detsolve

    if operator == "box":
        L = wave_operator()
    elif operator == "schrod":
        L = schrodinger_operator(schrod or SchrodingerParams())
    else:
        raise InvalidParams(f"unknown operator {operator!r}; use 'box' or 'schrod'")
    spec = detsolve.AnsatzSpec(degree=degree, p=p, zeta_degree=zeta_degree)
    system = detsolve.build_determining_system(L, spec)
    basis = detsolve.solve_null_space(system)
    checks = []

    rng = np.random.default_rng(seed)
    oracle_dim = detsolve.apply_probe_null_dimension(L, spec, rng)
    checks.append(
        _check(
            "detsolve_nullspace_dim_matches_oracle",
            "sec2",
            abs(basis.dimension - oracle_dim),
            0.5,
        )
    )

    if degree >= 1 and p == 2:
        worst = max(
            basis.projection_residual(v) for v in igl_generator_vectors(system).values()
        )
        checks.append(_check("detsolve_igl_generators_in_span", "eq31,sec4", worst, 1e-8))

    worst_reverify = 0.0
    for cand in basis.generators:
        _, res = residual_vs_multiple(ad_power(L, cand.Q, p), L, cand.zeta)
        worst_reverify = max(worst_reverify, res)
    checks.append(_check("detsolve_candidates_reverify", "eq5,eq6", worst_reverify, 1e-8))

    dims = []
    for factor in (10.0, 0.1):
        dims.append(detsolve.solve_null_space(system, tol=1e-8 * factor).dimension)
    stability = max(abs(d - basis.dimension) for d in dims)
    checks.append(_check("detsolve_dim_stable_under_tol", "sec2", stability, 0.5))

    params = {
        "operator": operator,
        "degree": degree,
        "p": p,
        "zeta_degree": zeta_degree,
        "null_dimension": basis.dimension,
        "oracle_dimension": oracle_dim,
        "seed": seed,
    }
    return ScenarioReport("detsolve", params, tuple(checks))


# ---------------------------------------------------------------------------
# seeded random parameter draws (shared by the CLI sweeps and the test suite)


def random_dalembert_params(rng: np.random.Generator, max_nx: float | None = None) -> DalembertParams:
    while True:
        direction = rng.normal(size=3)
        norm = np.linalg.norm(direction)
        if norm < 1e-12:
            continue
        n = direction / norm
        if max_nx is not None and abs(n[0]) > max_nx:
            continue
        return DalembertParams(
            beta=float(rng.uniform(-0.9, 0.9)),
            n=tuple(float(v) for v in n),
            omega=float(rng.uniform(0.1, 10.0)),
        )


def random_schrodinger_params(rng: np.random.Generator) -> SchrodingerParams:
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    speed = rng.uniform(0.01, 0.8)
    return SchrodingerParams(
        V=float(rng.uniform(-0.8, 0.8)),
        v=tuple(float(speed * u) for u in direction),
    )


def random_composition_pair(
    rng: np.random.Generator,
) -> tuple[DalembertParams, DalembertParams]:
    while True:
        p1 = random_dalembert_params(rng, max_nx=0.9)
        beta2 = float(rng.uniform(-0.8, 0.8))
        try:
            p2 = boosted_params(p1, beta2)
            MaxwellTransform.from_params(p2)
            MaxwellTransform.from_params(
                DalembertParams(beta=p1.beta + p1.lam * beta2, n=p1.n, omega=p1.omega, c=p1.c)
            )
        except InvalidParams:
            continue
        return p1, p2
