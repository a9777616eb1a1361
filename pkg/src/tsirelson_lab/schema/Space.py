from enum import Enum


class Space(str, Enum):
    """Sequence spaces known to the engines; values double as the command line spellings."""

    T = "t"
    T2 = "t2"
    ST2 = "st2"

    @classmethod
    def parse(cls, value: "str | Space") -> "Space":
        if isinstance(value, Space):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            valid = ", ".join(f'"{s.value}"' for s in cls)
            raise ValueError(f"Unknown space '{value}', use one of: {valid}") from None
