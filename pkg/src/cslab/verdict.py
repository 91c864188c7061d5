"""Three-valued, certificate-carrying answers."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Mapping


class Status(enum.Enum):
    ESTABLISHED = "Established"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: Any = None
    depth: int = 0
    notes: tuple[str, ...] = ()

    @classmethod
    def established(cls, certificate, depth=0, notes=()):
        return cls(Status.ESTABLISHED, certificate, depth, tuple(notes))

    @classmethod
    def refuted(cls, certificate, depth=0, notes=()):
        return cls(Status.REFUTED, certificate, depth, tuple(notes))

    @classmethod
    def unknown(cls, depth, notes=()):
        return cls(Status.UNKNOWN, None, depth, tuple(notes))

    @property
    def is_established(self) -> bool:
        return self.status is Status.ESTABLISHED

    @property
    def is_refuted(self) -> bool:
        return self.status is Status.REFUTED

    @property
    def is_unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    def describe(self) -> str:
        if self.is_unknown:
            extra = f"; {', '.join(self.notes)}" if self.notes else ""
            return f"Unknown({self.depth}{extra})"
        cert = self.certificate
        text = cert.describe() if hasattr(cert, "describe") else str(cert)
        return f"{self.status.value}({text})"

    def __str__(self):
        return self.describe()


@dataclass(frozen=True)
class Certificate:
    """Generic key/value certificate for verdicts without a dedicated type."""

    kind: str
    data: Mapping[str, Any] = field(default_factory=dict)

    def describe(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.data.items())
        return f"{self.kind}: {inner}" if inner else self.kind
