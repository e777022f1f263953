import math
from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class MomentReport:
    """One side-by-side comparison; lhs is None for right-hand-side-only assemblies."""
    lhs: Optional[float]
    rhs: float
    terms: dict = field(default_factory=dict)
    tail_bounds: dict = field(default_factory=dict)
    tolerance: float = 0.0
    flags: tuple = ()

    @property
    def difference(self):
        return math.nan if self.lhs is None else abs(self.lhs - self.rhs)

    @property
    def passed(self):
        if self.lhs is None:
            return None
        return abs(self.lhs - self.rhs) <= self.tolerance

    @property
    def tail_total(self):
        return math.fsum(self.tail_bounds.values())

    def as_dict(self):
        return {
            'lhs': self.lhs,
            'rhs': self.rhs,
            'difference': None if self.lhs is None else self.difference,
            'terms': dict(self.terms),
            'tail_bounds': dict(self.tail_bounds),
            'tolerance': self.tolerance,
            'pass': self.passed,
            'flags': list(self.flags),
        }
