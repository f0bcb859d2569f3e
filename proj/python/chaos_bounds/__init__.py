"""Gaussian approximation and concentration bounds for Poisson cluster functionals.

Laws are passed as ``family:params`` strings, e.g. ``"poisson:0.5"``,
``"binomial:2,0.25"``, ``"const:1"`` or ``"exp:1"``. Reports come back as dicts.
"""

import json as _json
from functools import wraps as _wraps

from . import _chaos_bounds as _core
from ._chaos_bounds import (  # noqa: F401
    CapExceeded,
    ChaosBoundsError,
    DivergentIntegral,
    DivergentModel,
    DomainError,
    EmptyInterval,
    InsufficientMoments,
    NoConvergence,
    RegimeError,
    SupercriticalError,
    UnknownFamily,
    bci_bound,
    borel_pmf,
    consul_pmf,
    dkw_margin,
    empirical_kolmogorov,
    empirical_wasserstein,
    factorial_moments,
    hertzian_integral,
    mark_gamma,
    progeny_moment_closed,
    progeny_moments,
    run_cli,
    sample_cluster,
    sample_interference,
    sample_progeny,
)


def _decoded(fn):
    @_wraps(fn)
    def wrapper(*args, **kwargs):
        return _json.loads(fn(*args, **kwargs))

    return wrapper


progeny_series = _decoded(_core.progeny_series)
abel_plana_bound = _decoded(_core.abel_plana_bound)
first_chaos_bounds = _decoded(_core.first_chaos_bounds)
shotnoise_bounds = _decoded(_core.shotnoise_bounds)
hawkes_bounds = _decoded(_core.hawkes_bounds)
hawkes_poisson_bounds = _decoded(_core.hawkes_poisson_bounds)
hawkes_binomial_bounds = _decoded(_core.hawkes_binomial_bounds)
interference_bounds = _decoded(_core.interference_bounds)
delta_poisson = _decoded(_core.delta_poisson)
delta_binomial = _decoded(_core.delta_binomial)
check_cumulant_condition = _decoded(_core.check_cumulant_condition)
insurance_tail_report = _decoded(_core.insurance_tail_report)
total_loss_interval = _decoded(_core.total_loss_interval)
verify_moments = _decoded(_core.verify_moments)

DEFAULT_SEED = 0xC0FFEE
