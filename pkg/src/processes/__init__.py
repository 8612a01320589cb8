from src.processes.brownian_timechange import (
    bessel_moments,
    bessel_pgf,
    bessel_pmf,
    elastic_continuous_moments,
    elastic_pgf,
    elastic_pmf,
    fp_ode_residual,
    fp_pgf,
    fp_pmf,
    fpd_moments,
    fpd_ode_residual,
    fpd_pgf,
    fpd_pmf,
    sojourn_moments,
    sojourn_pgf,
    sojourn_pgf_bessel,
    sojourn_pmf,
)
from src.processes.clocks import clock_laplace, sample_clock, sample_inverse_stable_path
from src.processes.drifted_gcp import (
    DualityEstimate,
    drifted_law,
    drifted_laplace,
    drifted_laplace_ode_residual,
    gstfcp_drift_laplace,
    hitting_boundary_laplace_gap,
    hitting_boundary_series,
    hitting_duality,
    hitting_duality_gap,
    hitting_refinement_study,
    sample_gstfcp_drift,
    sample_hitting_time,
)
from src.processes.fracint import (
    fracint_conditional_mean,
    fracint_gcp_moments,
    fracint_gfcp_mean,
    fracint_gfcp_variance,
    gfcp_step_path,
    rl_integral_jumps,
    rl_integral_step,
    sample_gcp_rl_integrals,
)
from src.processes.gcp_core import (
    enumerate_omega,
    gcp_moments,
    gcp_ode_residual,
    gcp_pgf,
    gcp_pmf,
    gcp_pmf_table,
    omega_weights,
    sample_gcp_at,
    simulate_gcp,
)
from src.processes.subordinated_gcp import (
    gfcp_cov,
    gfcp_pmf,
    gsfcp_pgf,
    gsfcp_pmf,
    gstfcp_pmf,
    incgamma_gcp_pgf,
    incgamma_gcp_pmf,
    incgamma_tail_slope,
    sample_time_changed,
    tempered_corr_ratio,
    tempered_gcp_moments,
    tempered_gcp_pgf,
    tempered_gcp_pmf,
    tempered_tail_slope,
)

__all__ = [
    "DualityEstimate",
    "bessel_moments",
    "bessel_pgf",
    "bessel_pmf",
    "clock_laplace",
    "drifted_law",
    "drifted_laplace",
    "drifted_laplace_ode_residual",
    "elastic_continuous_moments",
    "elastic_pgf",
    "elastic_pmf",
    "enumerate_omega",
    "fp_ode_residual",
    "fp_pgf",
    "fp_pmf",
    "fpd_moments",
    "fpd_ode_residual",
    "fpd_pgf",
    "fpd_pmf",
    "fracint_conditional_mean",
    "fracint_gcp_moments",
    "fracint_gfcp_mean",
    "fracint_gfcp_variance",
    "gcp_moments",
    "gcp_ode_residual",
    "gcp_pgf",
    "gcp_pmf",
    "gcp_pmf_table",
    "gfcp_cov",
    "gfcp_pmf",
    "gfcp_step_path",
    "gsfcp_pgf",
    "gsfcp_pmf",
    "gstfcp_drift_laplace",
    "gstfcp_pmf",
    "hitting_boundary_laplace_gap",
    "hitting_boundary_series",
    "hitting_duality",
    "hitting_duality_gap",
    "hitting_refinement_study",
    "incgamma_gcp_pgf",
    "incgamma_gcp_pmf",
    "incgamma_tail_slope",
    "omega_weights",
    "rl_integral_jumps",
    "rl_integral_step",
    "sample_clock",
    "sample_gcp_at",
    "sample_gcp_rl_integrals",
    "sample_gstfcp_drift",
    "sample_hitting_time",
    "sample_inverse_stable_path",
    "sample_time_changed",
    "simulate_gcp",
    "sojourn_moments",
    "sojourn_pgf",
    "sojourn_pgf_bessel",
    "sojourn_pmf",
    "tempered_corr_ratio",
    "tempered_gcp_moments",
    "tempered_gcp_pgf",
    "tempered_gcp_pmf",
    "tempered_tail_slope",
]
