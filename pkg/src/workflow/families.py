"""Family registry: one FamilyModel per process family, built from an ExperimentConfig.

A model bundles the analytic side (pmf, pgf, Laplace transform, moments) with
block samplers for the Monte Carlo side, so commands and verification suites
can treat every family the same way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from src.config.settings import get_settings
from src.errors import DomainError, InfiniteMomentError
from src.models.experiment import ExperimentConfig, Family
from src.models.outputs import MomentRecord, NormalizationReport
from src.models.params import ClockKind, ClockSpec, GcpParams
from src.montecarlo.engine import BlockSampler
from src.processes.brownian_timechange import (
    bessel_moments,
    bessel_pgf,
    bessel_pmf,
    elastic_pgf,
    elastic_pmf,
    fp_pgf,
    fp_pmf,
    fpd_moments,
    fpd_pgf,
    fpd_pmf,
    sojourn_moments,
    sojourn_pgf,
    sojourn_pgf_bessel,
    sojourn_pmf,
)
from src.processes.clocks import sample_tempered_incgamma_at
from src.processes.drifted_gcp import drifted_laplace, gstfcp_drift_laplace, sample_gstfcp_drift
from src.processes.gcp_core import gcp_moments, gcp_pgf, gcp_pmf, rate_exponent, sample_gcp_at
from src.processes.subordinated_gcp import (
    gfcp_cov,
    gfcp_mean,
    gfcp_pgf,
    gfcp_pmf,
    gfcp_variance,
    gsfcp_pgf,
    gsfcp_pmf,
    gstfcp_pmf,
    incgamma_gcp_pgf,
    incgamma_gcp_pmf,
    sample_gsfcp,
    sample_time_changed,
    tempered_gcp_moments,
    tempered_gcp_pgf,
    tempered_gcp_pmf,
)
from src.specfun.inversion import pgf_cdf
from src.specfun.mittag_leffler import ml3

Pmf = Callable[[int, float], float]
Transform = Callable[[float, float], float]
ComplexPgf = Callable[[np.ndarray, float], np.ndarray]
Moments = Callable[[float, "float | None"], MomentRecord]

# heavy-tailed families are summed this far before the inverted tail is added
HEAVY_TRUNCATION = 200
LIGHT_SUM_LIMIT = 2000
NORMALIZATION_POINTS = 1024


def _unit_mass(t: float) -> float:
    return 1.0


def _no_offset(t: float) -> float:
    return 0.0


@dataclass(frozen=True)
class FamilyModel:
    family: Family
    params: GcpParams
    pmf: Pmf
    laplace: Transform
    sample_values: Callable[[float], BlockSampler]
    pgf: Transform | None = None
    complex_pgf: ComplexPgf | None = None
    moments: Moments | None = None
    joint_sampler: Callable[[float, float], BlockSampler] | None = None
    heavy_tail: bool = False
    integer_valued: bool = True
    max_n: int | None = None
    mass: Callable[[float], float] = field(default=_unit_mass)
    offset: Callable[[float], float] = field(default=_no_offset)

    def sample_counts(self, t: float) -> BlockSampler:
        """Counts M(t) behind the sampled values, with any deterministic drift removed."""
        if not self.integer_valued:
            raise DomainError(f"{self.family.value} values are not integer counts at positive drift")
        sampler = self.sample_values(t)
        shift = self.offset(t)

        def block(rng: np.random.Generator, size: int) -> np.ndarray:
            return np.rint(np.asarray(sampler(rng, size), dtype=float) - shift).astype(np.int64)

        return block

    def pgf_at(self, u: float, t: float) -> float:
        if self.pgf is None:
            raise DomainError(f"{self.family.value} has no pgf; use the Laplace transform")
        return float(np.real(self.pgf(u, t)))

    def moments_at(self, t: float, s: float | None = None) -> MomentRecord:
        if self.moments is None:
            if self.heavy_tail:
                raise InfiniteMomentError(f"{self.family.value} has an infinite mean")
            raise DomainError(f"no closed-form moments for {self.family.value}")
        return self.moments(t, s)


def _via_pgf(pgf: Transform) -> Transform:
    def laplace(s: float, t: float) -> float:
        if s < 0:
            raise DomainError("Laplace argument must be non-negative")
        return float(np.real(pgf(math.exp(-s), t)))

    return laplace


def _at_time(p: GcpParams) -> Callable[[float], BlockSampler]:
    def at(t: float) -> BlockSampler:
        return lambda rng, size: sample_gcp_at(p, np.full(size, t), rng)

    return at


def _clocked(p: GcpParams, spec: ClockSpec) -> Callable[[float], BlockSampler]:
    def at(t: float) -> BlockSampler:
        return lambda rng, size: sample_time_changed(p, spec, t, rng, size)

    return at


def _gcp_joint(p: GcpParams, drift: float = 0.0) -> Callable[[float, float], BlockSampler]:
    """Rows (X(s), X(t)) built from independent increments."""

    def at(s: float, t: float) -> BlockSampler:
        def block(rng: np.random.Generator, size: int) -> np.ndarray:
            first = sample_gcp_at(p, np.full(size, s), rng)
            second = first + sample_gcp_at(p, np.full(size, t - s), rng)
            return np.column_stack((first + drift * s, second + drift * t))

        return block

    return at


def _gcp(config: ExperimentConfig, p: GcpParams) -> FamilyModel:
    return FamilyModel(
        family=Family.GCP,
        params=p,
        pmf=lambda n, t: gcp_pmf(p, n, t),
        pgf=lambda u, t: gcp_pgf(p, u, t),
        complex_pgf=lambda u, t: gcp_pgf(p, u, t),
        laplace=_via_pgf(lambda u, t: gcp_pgf(p, u, t)),
        moments=lambda t, s: gcp_moments(p, s if s is not None else t, t),
        sample_values=_at_time(p),
        joint_sampler=_gcp_joint(p),
    )


def _drifted(config: ExperimentConfig, p: GcpParams) -> FamilyModel:
    b = config.drift

    def moments(t: float, s: float | None) -> MomentRecord:
        base = gcp_moments(p, s if s is not None else t, t)
        return MomentRecord(mean=base.mean + b * t, var=base.var, cov=base.cov)

    def values(t: float) -> BlockSampler:
        return lambda rng, size: sample_gcp_at(p, np.full(size, t), rng) + b * t

    return FamilyModel(
        family=Family.DRIFTED,
        params=p,
        # pmf(n) is the mass of the atom at n + b t
        pmf=lambda n, t: gcp_pmf(p, n, t),
        laplace=lambda s, t: drifted_laplace(p, b, s, t),
        moments=moments,
        sample_values=values,
        joint_sampler=_gcp_joint(p, b),
        offset=lambda t: b * t,
    )


def _gfcp(config: ExperimentConfig, p: GcpParams) -> FamilyModel:
    beta = config.beta

    def moments(t: float, s: float | None) -> MomentRecord:
        return MomentRecord(
            mean=gfcp_mean(p, beta, t),
            var=gfcp_variance(p, beta, t),
            cov=gfcp_cov(p, beta, s, t) if s is not None else None,
        )

    return FamilyModel(
        family=Family.GFCP,
        params=p,
        pmf=lambda n, t: gfcp_pmf(p, beta, n, t),
        pgf=lambda u, t: gfcp_pgf(p, beta, u, t),
        laplace=_via_pgf(lambda u, t: gfcp_pgf(p, beta, u, t)),
        moments=moments,
        sample_values=_clocked(p, ClockSpec(kind=ClockKind.INVERSE_STABLE, beta=beta)),
        max_n=get_settings().jet_max_order,
    )


def _gsfcp(config: ExperimentConfig, p: GcpParams) -> FamilyModel:
    beta = config.beta
    heavy = beta < 1
    return FamilyModel(
        family=Family.GSFCP,
        params=p,
        pmf=lambda n, t: gsfcp_pmf(p, beta, n, t),
        pgf=lambda u, t: gsfcp_pgf(p, beta, u, t),
        complex_pgf=lambda u, t: gsfcp_pgf(p, beta, u, t),
        laplace=_via_pgf(lambda u, t: gsfcp_pgf(p, beta, u, t)),
        moments=None if heavy else (lambda t, s: gcp_moments(p, s if s is not None else t, t)),
        sample_values=lambda t: (lambda rng, size: sample_gsfcp(p, beta, t, rng, size)),
        heavy_tail=heavy,
        max_n=get_settings().jet_max_order,
    )


def _gstfcp_drift(config: ExperimentConfig, p: GcpParams) -> FamilyModel:
    alpha, gamma, beta, b = config.alpha, config.gamma, config.beta, config.drift

    def pmf(n: int, t: float) -> float:
        if b > 0:
            raise DomainError("the stable-drift law has no pmf at positive drift")
        return gstfcp_pmf(p, gamma, beta, n, t)

    def pgf(u: float, t: float) -> float:
        if b > 0:
            raise DomainError("the stable-drift law has no pgf at positive drift")
        return ml3(beta, 1.0, 1.0, -(t**beta) * float(rate_exponent(p, u)) ** gamma)

    return FamilyModel(
        family=Family.GSTFCP_DRIFT,
        params=p,
        pmf=pmf,
        pgf=pgf,
        laplace=lambda s, t: gstfcp_drift_laplace(p, b, alpha, gamma, beta, s, t),
        sample_values=lambda t: (lambda rng, size: sample_gstfcp_drift(p, b, alpha, gamma, beta, t, rng, size)),
        heavy_tail=gamma < 1 or (b > 0 and alpha < 1),
        integer_valued=b == 0,
        max_n=get_settings().jet_max_order,
    )


def _fp(config: ExperimentConfig, p: GcpParams) -> FamilyModel:
    return FamilyModel(
        family=Family.FP,
        params=p,
        pmf=lambda n, t: fp_pmf(p, n, t),
        pgf=lambda u, t: fp_pgf(p, u, t),
        complex_pgf=lambda u, t: fp_pgf(p, u, t),
        laplace=_via_pgf(lambda u, t: fp_pgf(p, u, t)),
        sample_values=_clocked(p, ClockSpec(kind=ClockKind.FIRST_PASSAGE)),
        heavy_tail=True,
    )


def _fpd(config: ExperimentConfig, p: GcpParams) -> FamilyModel:
    mu = config.mu
    return FamilyModel(
        family=Family.FPD,
        params=p,
        pmf=lambda n, t: fpd_pmf(p, mu, n, t),
        pgf=lambda u, t: fpd_pgf(p, mu, u, t),
        complex_pgf=lambda u, t: fpd_pgf(p, mu, u, t),
        laplace=_via_pgf(lambda u, t: fpd_pgf(p, mu, u, t)),
        moments=(lambda t, s: fpd_moments(p, mu, t)) if mu > 0 else None,
        sample_values=_clocked(p, ClockSpec(kind=ClockKind.FIRST_PASSAGE_DRIFT, mu=mu)),
        heavy_tail=mu == 0,
        # the passage never happens with probability 1 - e^{2 mu t}
        mass=lambda t: math.exp(2.0 * mu * t) if mu < 0 else 1.0,
    )


def _bessel(config: ExperimentConfig, p: GcpParams) -> FamilyModel:
    dim = config.gamma_dim
    return FamilyModel(
        family=Family.BESSEL,
        params=p,
        pmf=lambda n, t: bessel_pmf(p, dim, n, t),
        pgf=lambda u, t: bessel_pgf(p, dim, u, t),
        complex_pgf=lambda u, t: bessel_pgf(p, dim, u, t),
        laplace=_via_pgf(lambda u, t: bessel_pgf(p, dim, u, t)),
        moments=lambda t, s: bessel_moments(p, dim, t),
        sample_values=_clocked(p, ClockSpec(kind=ClockKind.SQUARED_BESSEL, gamma_dim=dim)),
    )


def _sojourn(config: ExperimentConfig, p: GcpParams) -> FamilyModel:
    return FamilyModel(
        family=Family.SOJOURN,
        params=p,
        pmf=lambda n, t: sojourn_pmf(p, n, t),
        pgf=lambda u, t: sojourn_pgf(p, u, t),
        complex_pgf=lambda u, t: sojourn_pgf_bessel(p, u, t),
        laplace=_via_pgf(lambda u, t: sojourn_pgf(p, u, t)),
        moments=lambda t, s: sojourn_moments(p, t),
        sample_values=_clocked(p, ClockSpec(kind=ClockKind.ARCSINE_SOJOURN)),
    )


def _elastic(config: ExperimentConfig, p: GcpParams) -> FamilyModel:
    gamma_el, method = config.gamma_el, config.elastic_method
    return FamilyModel(
        family=Family.ELASTIC,
        params=p,
        pmf=lambda n, t: elastic_pmf(p, gamma_el, n, t, method),
        pgf=lambda u, t: elastic_pgf(p, gamma_el, u, t),
        laplace=_via_pgf(lambda u, t: elastic_pgf(p, gamma_el, u, t)),
        sample_values=_clocked(p, ClockSpec(kind=ClockKind.ELASTIC, gamma_el=gamma_el)),
        max_n=get_settings().jet_max_order if method.value == "derivative" else None,
    )


def _incgamma(config: ExperimentConfig, p: GcpParams) -> FamilyModel:
    alpha, epsilon = config.alpha, config.epsilon
    return FamilyModel(
        family=Family.INCGAMMA,
        params=p,
        pmf=lambda n, t: incgamma_gcp_pmf(p, alpha, epsilon, n, t),
        pgf=lambda u, t: incgamma_gcp_pgf(p, alpha, epsilon, u, t),
        complex_pgf=lambda u, t: incgamma_gcp_pgf(p, alpha, epsilon, u, t),
        laplace=_via_pgf(lambda u, t: incgamma_gcp_pgf(p, alpha, epsilon, u, t)),
        sample_values=_clocked(p, ClockSpec(kind=ClockKind.INC_GAMMA, alpha=alpha, epsilon=epsilon)),
        heavy_tail=True,
        max_n=get_settings().jet_max_order,
    )


def _tempered(config: ExperimentConfig, p: GcpParams) -> FamilyModel:
    alpha, theta = config.alpha, config.theta

    def moments(t: float, s: float | None) -> MomentRecord:
        record = tempered_gcp_moments(p, alpha, theta, s if s is not None else t, t)
        return record if s is not None else record.model_copy(update={"cov": None})

    def joint(s: float, t: float) -> BlockSampler:
        def block(rng: np.random.Generator, size: int) -> np.ndarray:
            early = sample_tempered_incgamma_at(alpha, theta, s, rng, size)
            gap = sample_tempered_incgamma_at(alpha, theta, t - s, rng, size) if t > s else np.zeros(size)
            first = sample_gcp_at(p, early, rng)
            return np.column_stack((first, first + sample_gcp_at(p, gap, rng)))

        return block

    return FamilyModel(
        family=Family.TEMPERED,
        params=p,
        pmf=lambda n, t: tempered_gcp_pmf(p, alpha, theta, n, t),
        pgf=lambda u, t: tempered_gcp_pgf(p, alpha, theta, u, t),
        complex_pgf=lambda u, t: tempered_gcp_pgf(p, alpha, theta, u, t),
        laplace=_via_pgf(lambda u, t: tempered_gcp_pgf(p, alpha, theta, u, t)),
        moments=moments,
        sample_values=_clocked(p, ClockSpec(kind=ClockKind.TEMPERED_INC_GAMMA, alpha=alpha, theta=theta)),
        joint_sampler=joint,
        max_n=get_settings().jet_max_order,
    )


FAMILY_BUILDERS: dict[Family, Callable[[ExperimentConfig, GcpParams], FamilyModel]] = {
    Family.GCP: _gcp,
    Family.DRIFTED: _drifted,
    Family.GFCP: _gfcp,
    Family.GSFCP: _gsfcp,
    Family.GSTFCP_DRIFT: _gstfcp_drift,
    Family.FP: _fp,
    Family.FPD: _fpd,
    Family.BESSEL: _bessel,
    Family.SOJOURN: _sojourn,
    Family.ELASTIC: _elastic,
    Family.INCGAMMA: _incgamma,
    Family.TEMPERED: _tempered,
}


def build_family(config: ExperimentConfig) -> FamilyModel:
    params = GcpParams(rates=tuple(config.rates))
    return FAMILY_BUILDERS[config.family](config, params)


def normalization_report(model: FamilyModel, t: float) -> NormalizationReport:
    """Sum the pmf until it accounts for the expected mass.

    Light-tailed families are summed directly until the remainder drops
    below 1e-9. Heavy-tailed families are summed to a fixed truncation N
    and the tail 1 - P{M(t) <= N} is taken from the contour-inverted pgf.
    """
    expected = model.mass(t)
    if model.heavy_tail:
        if model.complex_pgf is None:
            raise DomainError(f"{model.family.value} needs a complex pgf for its tail mass")
        truncation = min(HEAVY_TRUNCATION, model.max_n or HEAVY_TRUNCATION)
        partial = math.fsum(model.pmf(n, t) for n in range(truncation + 1))
        cdf = pgf_cdf(lambda u: model.complex_pgf(u, t), truncation, points=NORMALIZATION_POINTS)
        return NormalizationReport(
            family=model.family.value,
            t=t,
            truncation=truncation,
            partial_sum=partial,
            tail_mass=expected - cdf,
            expected_mass=expected,
        )

    limit = model.max_n if model.max_n is not None else LIGHT_SUM_LIMIT
    terms: list[float] = []
    for n in range(limit + 1):
        terms.append(model.pmf(n, t))
        if expected - math.fsum(terms) <= 1e-9:
            break
    return NormalizationReport(
        family=model.family.value,
        t=t,
        truncation=len(terms) - 1,
        partial_sum=math.fsum(terms),
        expected_mass=expected,
    )
