class CurveCountError(ValueError):
    """Base class for every failure the library reports; `exit_code` is what the CLI returns."""

    exit_code = 1


class DomainError(CurveCountError):
    pass


class WindowUnderflow(CurveCountError):
    def __init__(self, requested, valid, detail=""):
        self.requested = tuple(requested)
        self.valid = tuple(valid)
        message = (
            f"window underflow: requested [{self.requested[0]},{self.requested[1]}], "
            f"valid [{self.valid[0]},{self.valid[1]}]"
        )
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class IntegralityViolation(CurveCountError):
    def __init__(self, detail):
        super().__init__(f"GV integrality violation: {detail}")


class SymmetryViolation(CurveCountError):
    def __init__(self, detail):
        super().__init__(f"symmetry violation: {detail}")


class NotRecognized(CurveCountError):
    def __init__(self, detail=""):
        message = "not recognized at given degrees"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class SchemaError(CurveCountError):
    exit_code = 2

    def __init__(self, path, key, reason):
        self.path = str(path)
        self.key = key
        super().__init__(f"{self.path}: {key}: {reason}")
