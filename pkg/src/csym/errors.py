"""Exception hierarchy shared by every module of :mod:`csym`."""


class CsymError(ValueError):
    """Base class for all input and verification errors raised by csym."""


class InvalidMatrix(CsymError):
    """Array is not a finite two-dimensional complex matrix."""


class NotSquare(CsymError):
    pass


class DimensionMismatch(CsymError):
    pass


class InvalidDimension(CsymError):
    pass


class NotUnitary(CsymError):
    def __init__(self, residual):
        self.residual = float(residual)
        super().__init__(f"matrix is not unitary (residual {self.residual:.3e})")


class NotInvolutive(CsymError):
    def __init__(self, residual):
        self.residual = float(residual)
        super().__init__(
            f"matrix is not symmetric, so x -> s conj(x) is not an involution "
            f"(residual {self.residual:.3e})"
        )


class RankDeterminationUnstable(CsymError):
    """A singular value sits inside the ambiguity band around the rank threshold."""

    def __init__(self, singular_value, threshold):
        self.singular_value = float(singular_value)
        self.threshold = float(threshold)
        super().__init__(
            f"singular value {self.singular_value:.3e} is too close to the rank "
            f"threshold {self.threshold:.3e}"
        )


class EigensolverFailure(CsymError):
    pass


class InvalidParams(CsymError):
    pass


class LengthMismatch(InvalidParams):
    pass


class NotDegreeTwo(CsymError):
    def __init__(self, residual):
        self.residual = float(residual)
        super().__init__(f"no quadratic annihilates the matrix (fit residual {self.residual:.3e})")


class RepeatedEigenvalue(InvalidParams):
    pass


class ZeroCoordinate(InvalidParams):
    pass


class NotContraction(CsymError):
    pass


class DefectRankNotOne(CsymError):
    def __init__(self, defect_rank, codefect_rank):
        self.defect_rank = int(defect_rank)
        self.codefect_rank = int(codefect_rank)
        super().__init__(
            f"defect indices are ({self.defect_rank}, {self.codefect_rank}), expected (1, 1)"
        )


class InvalidLambda(InvalidParams):
    pass


class CanonicalAlphaUndefined(InvalidParams):
    pass


class QuadratureTooCoarse(CsymError):
    def __init__(self, residual, points):
        self.residual = float(residual)
        self.points = int(points)
        super().__init__(
            f"basis Gram matrix deviates from identity by {self.residual:.3e} "
            f"with {self.points} quadrature points"
        )


class InvalidN(InvalidDimension):
    pass
