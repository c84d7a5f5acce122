"""Hankel determinants with Fisher-Hartwig symbols over the Hermite and Laguerre weights.

Four independent routes to the ratio ``H_{N,N,m,q}(mu) / H_{N+|q|,N}``:

* :func:`calH_oracle` - moment (Hankel) determinants, any symbol with integer q
* :func:`calH_duality` - a fixed-size ``2|q| x 2|q|`` determinant, linear cost in N
* :func:`I_quadrature` + :func:`prop1_assemble` - the dual contour integral
* :func:`ff_log` - the leading large-N formula, real q > -1/2
"""
from .asymptotics import FFResult, I0_log, boson_rho1_leading, calH_via_I0_log, ff_log, universality_residual
from .contour import (
    Circle,
    ContourSpec,
    ImaginaryAxis,
    IResult,
    I_quadrature,
    contour_pi_check,
    dual_integrand,
    prop1_assemble,
    scaled_I_log,
)
from .duality import calH_duality, h0_log, h_prefactor_definition, h_prefactor_log, lim_F_log, r_deriv_matrix
from .ensembles import (
    SaddleData,
    SymbolSpec,
    WeightSpec,
    action_S,
    opnorm_h_log,
    rho,
    saddle_data,
    selberg_ratio_log,
    weight_eval_log,
    z_selberg_log,
    zeta_log,
)
from .hankel_oracle import (
    MomentTable,
    SymbolPoly,
    base_moments,
    calH_oracle,
    h_multiple_integral_log,
    hankel_det_log,
    symbol_moments,
    symbol_poly,
)
from .mc import mc_expectation, sample_gue_spectrum
from .numerics import (
    ConditioningError,
    DerivStream,
    DomainError,
    FHankelError,
    LogSigned,
    PrecisionContext,
    QuadratureError,
    barnes_g_log,
    log_gamma,
    orthopoly_eval_derivs,
)

__version__ = "0.1.0"
