"""Conditional-volatility models: estimation, simulation, diagnostics.

Modules
-------
market_data   prices, percent log-returns, descriptive statistics
innovations   standardized innovation densities and scores
mean_filter   ARMA conditional-mean filtering
fgarch        omnibus family GARCH recursion + TGARCH
cgarch        permanent/transitory component GARCH
gas           score-driven location/log-scale filter
beta_egarch   Beta-Skew-t-EGARCH one/two component filters
estimator     maximum likelihood, sandwich standard errors
diagnostics   weighted Ljung-Box, ARCH LM, Portmanteau-Q
mcs           Monte Carlo study harness (bias, SE, TPR)
cli           command-line front end
"""

from . import (  # noqa: F401
    beta_egarch,
    cgarch,
    diagnostics,
    estimator,
    fgarch,
    gas,
    innovations,
    market_data,
    mcs,
    mean_filter,
)
from .estimator import FitResult, ModelSpec, fit, info_criteria  # noqa: F401
from .innovations import InnovationSpec, StandardizedDensity  # noqa: F401
from .market_data import PriceSeries, ReturnSeries, describe, to_log_returns  # noqa: F401
from .mcs import McsDesign, McsReport, TprInput, bias, run_study, tpr  # noqa: F401

__version__ = "0.1.0"
