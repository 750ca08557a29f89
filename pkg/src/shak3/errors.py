"""Exception hierarchy shared by every module of the package."""


class ShaK3Error(ValueError):
    """Base class; the CLI maps all of these to exit code 1."""


class InvalidInput(ShaK3Error):
    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
        self.detail = message


class DegenerateForm(ShaK3Error):
    pass


class NotASublattice(ShaK3Error):
    pass


class NotPrimitive(ShaK3Error):
    pass


class ZeroClass(ShaK3Error):
    pass


class NotInCarrier(ShaK3Error):
    pass


class NotWellDefined(ShaK3Error):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotPresentable(ShaK3Error):
    pass


class ImprimitiveClass(ShaK3Error):
    pass


class NoPreimage(ShaK3Error):
    pass


class NotCoprime(ShaK3Error):
    pass


class NotIsotropic(ShaK3Error):
    pass
