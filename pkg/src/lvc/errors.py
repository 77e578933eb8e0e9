"""Typed errors shared by the kernel, I/O layer, service and CLI.

Every error carries an ``exit_code`` used by the CLI contract:
2 for data/validation problems, 3 for I/O failures (usage errors are
handled by the argument parser itself and exit 1).
"""


class LvcError(Exception):
    exit_code = 2


class EmptyQuery(LvcError):
    pass


class NonFiniteInput(LvcError):
    pass


class DimensionMismatch(LvcError):
    pass


class IndivisibleFrames(LvcError):
    pass


class HeadsDontDivide(LvcError):
    pass


class InvalidConfig(LvcError):
    pass


class MissingQuery(LvcError):
    pass


class InsufficientFrames(LvcError):
    pass


class BadMagic(LvcError):
    pass


class UnsupportedVersion(LvcError):
    pass


class UnsupportedDtype(LvcError):
    pass


class UnsupportedShape(LvcError):
    pass


class FortranOrderUnsupported(LvcError):
    pass


class TruncatedPayload(LvcError):
    pass


class IoFailure(LvcError):
    exit_code = 3


#: name -> class, used to rebuild typed errors from service responses.
BY_NAME = {cls.__name__: cls for cls in list(globals().values())
           if isinstance(cls, type) and issubclass(cls, LvcError)}


def exit_code_for(error_name: str) -> int:
    cls = BY_NAME.get(error_name)
    return cls.exit_code if cls is not None else 2
