"""Exception hierarchy shared by every module of the package."""


class HilbertError(ValueError):
    """Base class for all geometry errors raised by hilbert2d."""


class InvalidDomain(HilbertError):
    pass


class NonCollinear(HilbertError):
    pass


class DegenerateConfiguration(HilbertError):
    pass


class PointAtInfinity(HilbertError):
    pass


class CoincidentPoints(HilbertError):
    pass


class NotInterior(HilbertError):
    def __init__(self, msg="point not interior"):
        super().__init__(msg)


class PoleInsideDomain(HilbertError):
    pass


class SampleOutsideDomain(HilbertError):
    pass


class NotEnoughExtremePoints(HilbertError):
    pass


class DegenerateQuadrilateral(HilbertError):
    pass


class InsufficientSamples(HilbertError):
    pass


class BoundaryPoint(HilbertError):
    pass


class InvalidWeb(HilbertError):
    pass
