"""Search budgets, all scaled by the GENUSLAB_BUDGET environment variable.

Every unbounded-looking search in the package is actually bounded by one of
these knobs; exhausting a budget raises a typed error instead of looping.
GENUSLAB_BUDGET is a positive float multiplier (default 1.0).
"""

import os
from dataclasses import dataclass


def budget_scale() -> float:
    raw = os.environ.get("GENUSLAB_BUDGET", "1")
    try:
        val = float(raw)
    except ValueError:
        return 1.0
    return val if val > 0 else 1.0


@dataclass(frozen=True)
class Budgets:
    factor_trial_bound: int = 10**6       # trial division limit for integers
    pollard_iterations: int = 200_000     # rho budget after trial division
    poly_degree_bound: int = 64           # refuse factoring beyond this degree
    cf_period_bound: int = 10**4          # continued-fraction steps for units
    generator_norm_factor: int = 4        # search |N(x)| <= factor * N(ideal)
    norm_equation_height: int = 1000      # coefficient height in norm searches
    norm_search_evals: int = 200_000      # candidate cap in norm-form searches
    valuation_power_bound: int = 512      # max prime-power in ideal valuations

    def scaled(self) -> "Budgets":
        s = budget_scale()
        if s == 1.0:
            return self
        return Budgets(
            factor_trial_bound=max(2, int(self.factor_trial_bound * s)),
            pollard_iterations=max(1, int(self.pollard_iterations * s)),
            poly_degree_bound=max(1, int(self.poly_degree_bound * s)),
            cf_period_bound=max(1, int(self.cf_period_bound * s)),
            generator_norm_factor=max(1, int(self.generator_norm_factor * s)),
            norm_equation_height=max(1, int(self.norm_equation_height * s)),
            norm_search_evals=max(1, int(self.norm_search_evals * s)),
            valuation_power_bound=max(1, int(self.valuation_power_bound * s)),
        )


def current_budgets() -> Budgets:
    return Budgets().scaled()
