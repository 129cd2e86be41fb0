"""Exception types raised by the immobilization toolkit."""


class ImmobilizationError(Exception):
    """Base class for all library errors."""


class DegenerateSimplex(ImmobilizationError):
    pass


class InvalidFan(ImmobilizationError):
    pass


class NonPositiveRadicand(ImmobilizationError):
    pass


class NonNegativeKappaSum(ImmobilizationError):
    pass


class OffFace(ImmobilizationError):
    def __init__(self, index, residual):
        self.index = index
        self.residual = residual
        super().__init__(f"contact {index} is off the hyperplane of its face "
                         f"(distance {residual:.3g})")


class BadStochastic(ImmobilizationError):
    pass


class NotSymmetric(ImmobilizationError):
    pass


class NotCentredFeasible(ImmobilizationError):
    def __init__(self, z, violations):
        self.z = z
        self.violations = list(violations)
        super().__init__(f"no interior centred contact set at z={[float(x) for x in z]}; "
                         f"violated entries: {self.violations}")


class LeftFace(ImmobilizationError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"displaced contact {index} left its face "
                         f"(barycentric coordinate {value:.3g})")


class NotInSpace(ImmobilizationError):
    """Displacement does not preserve symmetry of the penetration matrix."""

    def __init__(self, wedge_defect, residual):
        self.wedge_defect = wedge_defect
        self.residual = residual
        super().__init__(f"displacement is outside the symmetry-preserving space "
                         f"(wedge defect {wedge_defect:.3g})")


class BadInput(ImmobilizationError):
    pass


class ZeroTranslation(ImmobilizationError):
    pass


class ConsistencyError(ImmobilizationError):
    """Two routes to the same quantity disagreed; indicates a bug."""
