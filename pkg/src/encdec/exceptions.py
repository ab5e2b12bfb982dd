from pathlib import Path
from typing import Optional


class EncDecError(Exception):
    """Base class for all errors raised by encdec"""


class ArgumentError(EncDecError, ValueError):
    """An operation was called with arguments violating its preconditions"""


class DegenerateInputError(ArgumentError):
    """Input carries no information for the requested test"""


class InputFormatError(ArgumentError):
    """A user-supplied file could not be parsed"""

    def __init__(
        self,
        message: str,
        path: Optional[Path] = None,
        line: Optional[int] = None,
        column: Optional[str] = None,
    ):
        self.path = path
        self.line = line
        self.column = column
        location = []
        if path is not None:
            location.append(str(path))
        if line is not None:
            location.append(f'line {line}')
        if column is not None:
            location.append(f'column {column!r}')
        prefix = f'{", ".join(location)}: ' if location else ''
        super().__init__(f'{prefix}{message}')


class SchemaMismatchError(ArgumentError):
    """Two subject files disagree on their feature columns"""

    def __init__(self, first: Path, second: Path, detail: str):
        self.first = first
        self.second = second
        super().__init__(f'Schema mismatch between {first} and {second}: {detail}')


class StageError(EncDecError):
    """A pipeline stage failed; the original error is kept as ``__cause__``"""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        super().__init__(f'Stage {stage!r} failed: {cause}')

    @property
    def is_input_error(self) -> bool:
        return isinstance(self.__cause__, ArgumentError)
