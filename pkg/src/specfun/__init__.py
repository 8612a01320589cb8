from src.specfun.derivatives import PhiKind, exp_phi_jet, inverse_stable_mixture_jet, phi_jet
from src.specfun.functions import (
    bessel_k_halfint,
    inc_beta,
    kummer1f1,
    log_bessel_k_halfint,
    lower_inc_gamma,
    lower_inc_gamma_complex,
)
from src.specfun.inversion import pgf_cdf, pgf_coefficients
from src.specfun.jets import TaylorJet
from src.specfun.mittag_leffler import ml3, ml3_derivative, ml_taylor_coefficients

__all__ = [
    "PhiKind",
    "TaylorJet",
    "bessel_k_halfint",
    "exp_phi_jet",
    "inc_beta",
    "inverse_stable_mixture_jet",
    "kummer1f1",
    "log_bessel_k_halfint",
    "lower_inc_gamma",
    "lower_inc_gamma_complex",
    "ml3",
    "ml3_derivative",
    "ml_taylor_coefficients",
    "pgf_cdf",
    "pgf_coefficients",
    "phi_jet",
]
