"""Exception hierarchy. Each family carries the CLI exit code it maps to."""


class QicselError(Exception):
    exit_code = 1


class InputError(QicselError, ValueError):
    """Malformed or semantically invalid input (circuits, maps, noise files)."""

    exit_code = 2


class CircuitParseError(InputError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class UnsupportedGateError(InputError):
    def __init__(self, gate: str, line: int | None = None):
        self.gate = gate
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unsupported gate {gate!r}{where}")


class QubitRangeError(InputError):
    pass


class InstanceTooLargeError(InputError):
    pass


class NoEmbeddingError(QicselError):
    exit_code = 3


class SimulationError(QicselError):
    exit_code = 4


class MissingNoiseError(SimulationError, KeyError):
    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class NonCliffordError(SimulationError):
    pass
