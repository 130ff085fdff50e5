"""Resource caps shared by enumeration and convolution."""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_MAX_LEVEL = 12
DEFAULT_MAX_SUPPORT = 4096

ENV_MAX_LEVEL = "FREEMAGMA_MAX_LEVEL"
ENV_MAX_SUPPORT = "FREEMAGMA_MAX_SUPPORT"


@dataclass(frozen=True)
class Limits:
    max_level: int = DEFAULT_MAX_LEVEL
    max_support: int = DEFAULT_MAX_SUPPORT

    @classmethod
    def from_env(cls, environ=None) -> "Limits":
        environ = os.environ if environ is None else environ
        return cls(
            max_level=int(environ.get(ENV_MAX_LEVEL, DEFAULT_MAX_LEVEL)),
            max_support=int(environ.get(ENV_MAX_SUPPORT, DEFAULT_MAX_SUPPORT)),
        )
