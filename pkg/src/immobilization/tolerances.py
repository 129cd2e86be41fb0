"""Numerical tolerances shared across the toolkit.

Every threshold is relative to a natural scale of the quantity it guards
(a matrix norm, a simplex diameter, ...). Pass a modified copy to any
operation that accepts ``tol=`` to override.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    degeneracy: float = 1e-12
    rank: float = 1e-10
    sym: float = 1e-9
    apd: float = 1e-10
    interior: float = 1e-10
    plane: float = 1e-9
    stochastic: float = 1e-12

    def with_overrides(self, **kwargs):
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


DEFAULT = Tolerances()
