"""Exception types shared across the toolchain.

Every expected failure mode derives from ToolchainError so the command
line front ends can map them to a single exit code; anything else that
escapes is an internal error.
"""


class ToolchainError(Exception):
    """Base class for parse, check, grounding and format errors."""


class ParseError(ToolchainError):
    """Syntax or lexical error, with a source position."""

    def __init__(self, message, file="<input>", line=0, col=0):
        super().__init__(message)
        self.message = message
        self.file = file
        self.line = line
        self.col = col

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col}: {self.message}"


class GroundError(ToolchainError):
    """Evaluation error during grounding: bad arithmetic, unresolved
    constants, or a type predicate that is not unary."""


class TdcError(ToolchainError):
    """Malformed ground theory file."""

    def __init__(self, message, file="<tdc>", line=0):
        super().__init__(message)
        self.message = message
        self.file = file
        self.line = line

    def __str__(self):
        return f"{self.file}:{self.line}: {self.message}"
