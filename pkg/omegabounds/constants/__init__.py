from omegabounds.constants.bigreal import (
    MAX_DIGITS,
    BigReal,
    ConstantError,
    PrecisionError,
    PrecisionShortfallError,
)
from omegabounds.constants.coefficients import a_coeff_derivative, a_coeff_integral
from omegabounds.constants.series import (
    ConstantSet,
    alpha0,
    alpha1,
    beta0,
    constant_set,
    euler_gamma,
    m_double_prime,
    m_double_prime_direct,
    m_prime,
    meissel_mertens,
    mobius,
    totient,
    zeta_int,
)
from omegabounds.constants.special import ei, li, li_array

__all__ = [
    "MAX_DIGITS",
    "BigReal",
    "ConstantError",
    "ConstantSet",
    "PrecisionError",
    "PrecisionShortfallError",
    "a_coeff_derivative",
    "a_coeff_integral",
    "alpha0",
    "alpha1",
    "beta0",
    "constant_set",
    "ei",
    "euler_gamma",
    "li",
    "li_array",
    "m_double_prime",
    "m_double_prime_direct",
    "m_prime",
    "meissel_mertens",
    "mobius",
    "totient",
    "zeta_int",
]
