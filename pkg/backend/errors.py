from typing import Any, Dict, Optional


class TorsorError(Exception):
    """Base class for every error the library reports as a structured object"""

    kind = "TorsorError"

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message or self.kind)
        self.message = message or self.kind
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"kind": self.kind, "message": self.message}
        payload.update(self.details)
        return payload


class ZeroFunction(TorsorError):
    kind = "ZeroFunction"


class WindowTooSmall(TorsorError):
    kind = "WindowTooSmall"


class NotExpandable(TorsorError):
    kind = "NotExpandable"


class TrivialLocally(TorsorError):
    kind = "TrivialLocally"


class SchemeMismatch(TorsorError):
    kind = "SchemeMismatch"


class MissingTorsorAtNode(TorsorError):
    kind = "MissingTorsorAtNode"


class InvalidConfig(TorsorError):
    kind = "InvalidConfig"


class UnsupportedKind(TorsorError):
    kind = "UnsupportedKind"


class BadParameters(TorsorError):
    kind = "BadParameters"


class PrecisionExhausted(TorsorError):
    kind = "PrecisionExhausted"


class NotAUnit(TorsorError):
    kind = "NotAUnit"


class PositivePiContent(TorsorError):
    kind = "PositivePiContent"


class BadN(TorsorError):
    kind = "BadN"


class RamifiedInputContent(TorsorError):
    kind = "RamifiedInputContent"


class ExtensionRequired(TorsorError):
    """Raised when the normal form only exists after a ramified base change of degree c"""

    kind = "ExtensionRequired"

    def __init__(self, c: int, message: str = "", **details: Any):
        super().__init__(message or f"ramified extension of degree {c} required", c=c, **details)
        self.c = c


class NeedsRamifiedExtension(TorsorError):
    kind = "NeedsRamifiedExtension"

    def __init__(self, c: int, message: str = "", **details: Any):
        super().__init__(message or f"lifting needs a ramified extension of degree {c}", c=c, **details)
        self.c = c


class TrivialDatum(TorsorError):
    kind = "TrivialDatum"


class DocumentError(TorsorError):
    """Errors in the document language; these map to exit code 2"""

    kind = "DocumentError"

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}", line=line, column=column)
        self.line = line
        self.column = column


class ParseError(DocumentError):
    kind = "ParseError"


class TypeCheckError(DocumentError):
    kind = "TypeCheckError"
