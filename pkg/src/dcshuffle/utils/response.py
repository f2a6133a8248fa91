from dataclasses import dataclass
from typing import Any
from typing import Callable
from typing import Dict
from typing import Optional


@dataclass(frozen=True)
class Violation:
    """An invariant breach found by validation.

    ``code`` is machine-readable (kebab-case), ``message`` is for humans.
    """

    code: str
    message: str

    def to_json(self) -> Dict[str, Any]:
        return {"code": self.code, "message": self.message}


def violation(
    code: str,
    note: str,
    log: Optional[Callable[[str], None]] = None,
) -> Violation:
    """Helper for reporting and logging a violation"""

    if log:
        log(f"{code}: {note}")

    return Violation(code=code, message=note)
