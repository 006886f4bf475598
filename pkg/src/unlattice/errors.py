"""Exception types shared across the package."""


class UnlatticeError(Exception):
    """Base class for all library errors."""


class KindMismatch(UnlatticeError):
    """Operation applied to elements (or norms) of incompatible carrier kinds."""


class BadRegion(UnlatticeError):
    """Restriction region is overlapping, out of range, or malformed."""


class NotInIdeal(UnlatticeError):
    """Test vector lies outside the ideal (infinite pair norm)."""


class BadUnit(UnlatticeError):
    """Metric unit does not match the pair's declared witness."""


class UnsupportedPair(UnlatticeError):
    """Pair descriptor names an (ambient, ideal) combination that is not built in."""


class NotDense(UnlatticeError):
    """Witness refused: the ideal is not order dense and the target is disjoint from it.

    Carries the pair's order-density flag for diagnostics.
    """

    def __init__(self, message: str, order_dense_flag: bool = False):
        super().__init__(message)
        self.order_dense_flag = order_dense_flag


class BadParams(UnlatticeError):
    """Family constructor received invalid parameters."""


class BadFamily(UnlatticeError):
    """Family is structurally incompatible with the requested check."""


class UnknownLaw(UnlatticeError):
    """Law identifier not in the catalog."""


class CertificateViolated(UnlatticeError):
    """Exact computation contradicts a claimed certificate or refutation."""


class HorizonExhausted(UnlatticeError):
    """Search ran past its certified bound without finding an admissible index."""
