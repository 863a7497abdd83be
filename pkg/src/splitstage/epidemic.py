"""SAIUQR pandemic model: transition/new-infection matrices and R0.

The linearized infection dynamics around the disease-free state are carried
by a 4x4 transition matrix (an M-matrix for any valid parameter set) and a
rank-one new-infection matrix. The next-generation matrix is the product of
the new-infection matrix with the transition inverse, and the basic
reproduction number R0 is its spectral radius. An age-structured variant
expands both matrices by Kronecker products with a population-weighted
contact matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidParamsError, MaxIterationsError
from .linalg import (
    as_matrix,
    as_vector,
    inverse,
    kron,
    spectral_radius,
)
from .splittings import jacobi_splitting
from .twostage import TwoStageConfig, run_stationary

_RATE_FIELDS = (
    "mu", "beta", "alpha_a", "alpha_i", "alpha_u", "xi_a", "gamma_a",
    "gamma_q", "delta", "eta_a", "eta_i", "eta_u", "phi",
)


@dataclass(frozen=True)
class SaiuqrParams:
    """Rate parameters of the six-compartment model.

    mu: birth rate; beta: transmission probability rate; alpha_*: adjustment
    factors on the asymptomatic / reported / unreported routes; xi_a:
    quarantine rate; gamma_a: symptomatic-transition rate; gamma_q:
    quarantine release rate; delta: natural mortality; eta_*: recovery
    rates; theta: reported fraction; rho_s: quarantine-to-susceptible
    fraction; phi: return rate from the recovered class.
    """
    mu: float
    beta: float
    alpha_a: float
    alpha_i: float
    alpha_u: float
    xi_a: float
    gamma_a: float
    gamma_q: float
    delta: float
    eta_a: float
    eta_i: float
    eta_u: float
    theta: float
    rho_s: float
    phi: float

    def __post_init__(self):
        for name in _RATE_FIELDS:
            if getattr(self, name) < 0:
                raise InvalidParamsError(f"{name} must be nonnegative")
        if not 0.0 < self.theta < 1.0:
            raise InvalidParamsError("theta must lie strictly inside (0, 1)")
        if not 0.0 <= self.rho_s <= 1.0:
            raise InvalidParamsError("rho_s must lie in [0, 1]")


@dataclass(frozen=True)
class AgeStructure:
    """Age groups with their populations and raw contact matrix."""
    populations: np.ndarray
    contact: np.ndarray

    def __post_init__(self):
        pops = as_vector(self.populations)
        contact = as_matrix(self.contact)
        if pops.size < 1:
            raise InvalidParamsError("need at least one age group")
        if np.any(pops <= 0):
            raise InvalidParamsError("populations must be positive")
        if contact.shape != (pops.size, pops.size):
            raise InvalidParamsError(
                f"contact matrix {contact.shape} does not match "
                f"{pops.size} groups")
        object.__setattr__(self, "populations", pops)
        object.__setattr__(self, "contact", contact)

    @property
    def groups(self) -> int:
        return self.populations.size


def _unit_control(_t: float) -> float:
    return 1.0


@dataclass(frozen=True)
class ContactComponents:
    """Contact matrix split by venue, with time-dependent controls.

    The work / school / other components are scaled by their control
    functions (values clamped to [0, 1]); home contact is never reduced.
    """
    home: np.ndarray
    work: np.ndarray
    school: np.ndarray
    other: np.ndarray
    u_work: Callable[[float], float] = _unit_control
    u_school: Callable[[float], float] = _unit_control
    u_other: Callable[[float], float] = _unit_control

    def __post_init__(self):
        mats = [as_matrix(m) for m in (self.home, self.work, self.school,
                                       self.other)]
        if len({m.shape for m in mats}) != 1:
            raise InvalidParamsError("contact components must share a shape")
        for name, m in zip(("home", "work", "school", "other"), mats):
            object.__setattr__(self, name, m)


def contact_matrix(components: ContactComponents, t: float) -> np.ndarray:
    """Total contact matrix at time t with controls applied."""
    def clamp(u):
        return min(max(float(u(t)), 0.0), 1.0)

    return (components.home
            + clamp(components.u_work) * components.work
            + clamp(components.u_school) * components.school
            + clamp(components.u_other) * components.other)


def build_transition(p: SaiuqrParams) -> np.ndarray:
    """The 4x4 transition matrix of the linearized infection dynamics."""
    return np.array([
        [p.xi_a + p.gamma_a + p.eta_a + p.delta, 0.0, 0.0, -p.phi],
        [-p.theta * p.gamma_a, p.eta_i + p.delta, 0.0,
         -(1.0 - p.rho_s) * p.gamma_q],
        [-(1.0 - p.theta) * p.gamma_a, 0.0, p.eta_u + p.delta, 0.0],
        [-p.xi_a, 0.0, 0.0, p.gamma_q + p.delta],
    ])


def build_infection(p: SaiuqrParams) -> np.ndarray:
    """The rank-one new-infection matrix: only its first row is nonzero."""
    b = np.zeros((4, 4))
    b[0, :3] = [p.beta * p.alpha_a, p.beta * p.alpha_i, p.beta * p.alpha_u]
    return b


def build_infection_weighted(p: SaiuqrParams, weights) -> np.ndarray:
    """New-infection matrix with per-route multipliers.

    Each transmission route (asymptomatic, reported, unreported) is scaled
    by its weight, e.g. population fractions observed at some state of the
    epidemic; unit weights recover ``build_infection``.
    """
    w = as_vector(weights)
    if w.size != 3:
        raise InvalidParamsError("expected one weight per transmission route")
    b = np.zeros((4, 4))
    b[0, :3] = [p.beta * p.alpha_a * w[0], p.beta * p.alpha_i * w[1],
                p.beta * p.alpha_u * w[2]]
    return b


def expand_age(transition4, infection4,
               age: AgeStructure) -> tuple[np.ndarray, np.ndarray]:
    """Kronecker extension to M age groups.

    The transition matrix expands with the identity; the infection matrix
    with K where K_ij = C_ij * N_i / N_j.
    """
    a4 = as_matrix(transition4)
    b4 = as_matrix(infection4)
    if a4.shape != (4, 4) or b4.shape != (4, 4):
        raise InvalidParamsError("expected 4x4 model matrices")
    n = age.populations
    k = age.contact * np.outer(n, 1.0 / n)
    return kron(a4, np.eye(age.groups)), kron(b4, k)


def incidence(p: SaiuqrParams, age: AgeStructure, asymptomatic, reported,
              unreported, t: float = 0.0, fractions=None,
              contact_at: Callable[[float], np.ndarray] | None = None,
              beta_at: Callable[[float], float] | None = None) -> np.ndarray:
    """Per-group force of infection.

    lambda_i = beta(t) * sum_j C_ij(t) (f_a Ia_j + f_s Is_j + f_u Iu_j) / N_j.
    The route fractions default to the model's adjustment factors; beta and
    the contact matrix default to their static values.
    """
    ia = as_vector(asymptomatic)
    is_ = as_vector(reported)
    iu = as_vector(unreported)
    m = age.groups
    if not (ia.size == is_.size == iu.size == m):
        raise InvalidParamsError("infective vectors must have one entry per group")
    if fractions is None:
        f_a, f_s, f_u = p.alpha_a, p.alpha_i, p.alpha_u
    else:
        f_a, f_s, f_u = (float(f) for f in fractions)
        if min(f_a, f_s, f_u) < 0:
            raise InvalidParamsError("route fractions must be nonnegative")
    contact = contact_at(t) if contact_at is not None else age.contact
    contact = as_matrix(contact)
    if contact.shape != (m, m):
        raise InvalidParamsError("contact matrix does not match group count")
    beta = float(beta_at(t)) if beta_at is not None else p.beta
    mix = (f_a * ia + f_s * is_ + f_u * iu) / age.populations
    return beta * (contact @ mix)


@dataclass(frozen=True)
class NgmResult:
    """Next-generation matrix bundle: matrices, inverse, and R0."""
    transition: np.ndarray
    infection: np.ndarray
    transition_inverse: np.ndarray
    ngm: np.ndarray
    r0: float
    method: str = "direct"
    report: object = field(default=None, compare=False)


def ngm(p: SaiuqrParams, age: AgeStructure | None = None,
        method: str = "direct",
        config: TwoStageConfig | None = None) -> NgmResult:
    """Next-generation matrix and basic reproduction number.

    method="direct" inverts the transition matrix by LU. method="twostage"
    solves the transition system against the infection matrix (and against
    the identity, for the inverse) with the two-stage scheme instead; the
    spectral radius is then taken from the solution of A X = B, which shares
    its nonzero spectrum with the next-generation matrix. Raises
    MaxIterationsError when an iterative solve does not converge.
    """
    transition = build_transition(p)
    infection = build_infection(p)
    if age is not None:
        transition, infection = expand_age(transition, infection, age)

    if method == "direct":
        trans_inv = inverse(transition)
        ngm_matrix = infection @ trans_inv
        return NgmResult(transition=transition, infection=infection,
                         transition_inverse=trans_inv, ngm=ngm_matrix,
                         r0=spectral_radius(ngm_matrix), method=method)
    if method == "twostage":
        cfg = config if config is not None else TwoStageConfig()
        outer = jacobi_splitting(transition)
        solution, report = run_stationary(transition, infection, outer, cfg)
        if not report.converged:
            raise MaxIterationsError(
                f"two-stage solve of the infection system did not converge "
                f"in {report.outer_iterations} outer iterations")
        inv_solution, inv_report = run_stationary(
            transition, np.eye(transition.shape[0]), outer, cfg)
        if not inv_report.converged:
            raise MaxIterationsError(
                "two-stage solve of the inverse system did not converge")
        ngm_matrix = infection @ inv_solution
        return NgmResult(transition=transition, infection=infection,
                         transition_inverse=inv_solution, ngm=ngm_matrix,
                         r0=spectral_radius(solution), method=method,
                         report=report)
    raise ValueError(f"unknown method {method!r}")
