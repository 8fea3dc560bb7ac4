"""Exception hierarchy shared by all submodules."""


class SegalError(Exception):
    """Base class for every error raised by this package."""


class SignatureMismatch(SegalError):
    """Outgoing and incoming boundary signatures disagree."""


class InternalInconsistency(SegalError):
    """A derived quantity (genus, Euler characteristic) came out impossible."""


class NotOrientationPreserving(SegalError):
    """A tangent map or chart sample has |f_z| <= |f_zbar| somewhere."""


class OutOfDisc(SegalError):
    """A dilatation value lies outside the open unit disc (or too close to it)."""


class GridMismatch(SegalError):
    """Two sampled fields do not live on compatible grids."""


class DegenerateFrame(SegalError):
    """Frame vector unusable for building an almost complex structure."""


class InvalidACS(SegalError):
    """Matrix fails J^2 = -Id or the orientation requirement."""


class NonMonotone(SegalError):
    """Sample list expected to be strictly increasing is not."""


class InvalidPhi(SegalError):
    """Circle map fails a structural requirement (winding, derivative sign,
    or the half-angle condition on the upper semicircle)."""


class JacobianDegenerate(SegalError):
    """A sampled map has a non-positive Jacobian at some node."""


class DomainError(SegalError):
    """Argument outside the domain of definition."""


class DegenerateQuad(SegalError):
    """Quadrilateral vertices coincide or are otherwise unusable."""


class QuadratureFailure(SegalError):
    """Adaptive integration failed to reach its tolerance."""


class OutOfWindow(SegalError):
    """Point outside the sampled window of a boundary strip."""


class CurveEscape(SegalError):
    """An integral curve left the strip before reaching the requested height."""


class InversionFailure(SegalError):
    """Coordinate grid could not be inverted (grid folds or Newton stalls)."""
