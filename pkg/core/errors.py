# See LICENSE for details


class MwlpError(Exception):
    """Base class for all errors raised by the solver library."""


class SizeGuardError(MwlpError):
    """Raised when an exact enumeration is requested on an instance above its size limits."""

    def __init__(self, what: str, n: int, max_n: int, m: int | None = None, max_m: int | None = None):
        self.n = n
        self.max_n = max_n
        self.m = m
        self.max_m = max_m
        msg = f'{what}: instance has n={n} (limit {max_n})'
        if m is not None:
            msg += f', m={m} (limit {max_m})'
        super().__init__(msg)


class InstanceParseError(MwlpError, ValueError):
    """Malformed instance or road-network file. The message names the line and the field."""

    def __init__(self, path: str, line_no: int | None, msg: str):
        self.path = path
        self.line_no = line_no
        where = f'{path}:{line_no}' if line_no is not None else path
        super().__init__(f'{where}: {msg}')


class DegenerateInstanceError(MwlpError, ValueError):
    pass


class UnknownStrategyError(MwlpError, ValueError):
    pass
