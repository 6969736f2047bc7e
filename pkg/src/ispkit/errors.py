"""Exception types shared across the package."""


class IspKitError(Exception):
    """Base class for all ispkit errors."""


class ParameterDomainError(IspKitError, ValueError):
    """A pipeline parameter is outside its mathematical domain (e.g. gain <= 0)."""


class ConstraintViolationError(IspKitError, ValueError):
    """A structural constraint is violated (e.g. CCM rows not normalized)."""


class DegenerateConstraintError(ConstraintViolationError):
    """CCM row sum too close to zero; row normalization is undefined."""


class DimensionMismatchError(IspKitError, ValueError):
    """Two arrays that must agree in shape do not."""


class WeightsFormatError(IspKitError, ValueError):
    """A weights document could not be parsed."""


class WeightsValidationError(IspKitError, ValueError):
    """A weights document parsed but violates a shape or finiteness invariant."""


class ImageFormatError(IspKitError, ValueError):
    """An image file is malformed or uses an unsupported encoding."""
