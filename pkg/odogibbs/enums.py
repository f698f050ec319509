from enum import Enum


class Errors(str, Enum):
    ScanLimit = "The bit scan limit was reached before the letter could be resolved."
    NonGeneric = "The sampled point is the zero point of the odometer, which is not generic."
    NoTransition = "No alpha to beta transition was found within the horizon."
    EmptyWindow = "A window must contain at least one letter."
    BadWord = "Words are written with the letters 'a' and 'b' only."

    @staticmethod
    def insufficient_depth(depth: int, needed: int) -> str:
        """Generates an error message for a residue that is too shallow."""
        return f"Depth {depth} is not enough, at least {needed} bits are required."

    @staticmethod
    def insufficient_window(length: int, needed: int) -> str:
        """Generates an error message for a window that cannot resolve the potential."""
        return f"A window of {length} letters is too short, at least {needed} are required."

    @staticmethod
    def word_too_long(length: int, max_len: int) -> str:
        """Generates an error message for a word longer than the language table."""
        return f"A word of length {length} exceeds the table maximum length {max_len}."

    @staticmethod
    def cost_guard(n: int, n_max: int) -> str:
        """Generates an error message for a refused exhaustive enumeration."""
        return f"Refusing to enumerate 2^{n} words, the configured limit is n_max={n_max}."

    @staticmethod
    def window_too_long(n: int, limit: int) -> str:
        """Generates an error message for a scan window past the cylinder measure limit."""
        return f"Refusing a scan window of length {n}, cylinder measures are computed up to length {limit}."

    @staticmethod
    def out_of_scope(name: str, value: int, minimum: int) -> str:
        """Generates an error message for a parameter below the range the construction covers."""
        return f"{name}={value} is out of scope, the smallest admissible value is {minimum}."

    def __repr__(self) -> str:
        return self.value


class Letter(str, Enum):
    """Letters of the two symbol alphabet. ``ALPHA`` codes points outside the set A."""

    ALPHA = "a"
    BETA = "b"

    @property
    def bit(self) -> int:
        """The bit used for this letter in word masks."""
        return 1 if self is Letter.BETA else 0

    def __repr__(self) -> str:
        return self.value


class Status(str, Enum):
    IN = "in"
    POSSIBLY = "possibly"


class Polarity(str, Enum):
    IN = "in"
    OUT = "out"


class FamilyKind(str, Enum):
    A = "A"
    A_K = "A_k"
    E_K = "E_k"
    B_M = "B_m"


class Containment(str, Enum):
    CERTAIN_IN = "certain_in"
    CERTAIN_OUT = "certain_out"
    UNKNOWN = "unknown"


class Tail(str, Enum):
    ZEROS = "zeros"
    ONES = "ones"
    SEEDED = "seeded"


class Side(str, Enum):
    UNDER = "under"
    OVER = "over"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class Commands(str, Enum):
    LANGUAGE = "language"
    MEASURE = "measure"
    PRESSURE = "pressure"
    GIBBS_O = "gibbs-o"
    VW_SCAN = "vw-scan"
    ORBIT = "orbit"
    LEMMAS = "lemmas"

    def __repr__(self) -> str:
        return f"{self.value}"


class ExitStatus(int, Enum):
    OK = 0
    CHECK_FAILED = 1
    USAGE = 2
    NOT_CONVERGED = 3
