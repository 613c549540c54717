# pacrank/utils/errors.py


class PacRankError(Exception):
    """Base class for everything pacrank raises on purpose."""


class InvalidInputError(PacRankError, ValueError):
    """Rejected input: bad ids, empty sets, parameters outside their domain."""


class ModelFileError(PacRankError):
    def __init__(self, path, reason: str):
        self.path = str(path)
        self.reason = reason
        super().__init__(f"{self.path}: {reason}")


class ExportError(PacRankError):
    def __init__(self, destination, reason: str):
        self.destination = str(destination)
        self.reason = reason
        super().__init__(f"could not write {self.destination}: {reason}")
