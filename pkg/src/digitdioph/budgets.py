import os
from dataclasses import dataclass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


@dataclass(frozen=True)
class Budgets:
    enum: int = 10**7
    residue: int = 10**6
    bits: int = 10**6

    @classmethod
    def from_env(cls) -> "Budgets":
        return cls(
            enum=_env_int("DIGITDIOPH_BUDGET_ENUM", cls.enum),
            residue=_env_int("DIGITDIOPH_BUDGET_RESIDUE", cls.residue),
            bits=_env_int("DIGITDIOPH_BUDGET_BITS", cls.bits),
        )


DEFAULT = Budgets.from_env()


def configure(new: Budgets) -> None:
    """Replace the process-wide defaults (used by the CLI flags)."""
    global DEFAULT
    DEFAULT = new
