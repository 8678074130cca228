"""
Infinity branches and generalized asymptotes of curves given by meromorphic
parametrizations.

>>> from gasymptote import CurveParam, all_asymptotes
>>> p = CurveParam.from_strings("(sqrt(s)+1)/(sqrt(s)*sin(s))", "(s^2+s+5)/sin(s)")
>>> [str(a) for a in all_asymptotes(p, window=(-1, 1, -1, 1))]
['(t^3, 5*t^2 + -10/3*t + 8/3)']
"""

from .expr import (CurveParam, ParseError, PoleError, evaluate, parse,
                   substitute_power, to_string)
from .series import (INFINITY, PuiseuxSeries, expand_at, leading, pow_rational)
from .poles import PoleData, classify_orders, find_poles
from .branches import (InfinityBranch, approach_distance, branch_series,
                       branch_series_oracle, converge, infinity_point)
from .asymptotes import (GAsymptote, all_asymptotes, asymptote_from_branch,
                         equivalent, horizontal_asymptote, nd_asymptotes,
                         vertical_asymptote)

__version__ = "0.1.0"

__all__ = [
    "CurveParam", "ParseError", "PoleError", "evaluate", "parse",
    "substitute_power", "to_string", "INFINITY", "PuiseuxSeries", "expand_at",
    "leading", "pow_rational", "PoleData", "classify_orders", "find_poles",
    "InfinityBranch", "approach_distance", "branch_series",
    "branch_series_oracle", "converge", "infinity_point", "GAsymptote",
    "all_asymptotes", "asymptote_from_branch", "equivalent",
    "horizontal_asymptote", "nd_asymptotes", "vertical_asymptote",
]
