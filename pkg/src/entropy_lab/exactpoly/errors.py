class ExactPolyError(Exception):
    pass


class RingError(ExactPolyError):
    pass


class SubstitutionError(ExactPolyError):
    pass


class NotDivisible(ExactPolyError):
    pass


class ZeroPolyError(ExactPolyError):
    pass


class NotHomogeneous(ExactPolyError):
    pass
