"""Error types. Every error carries a stable ``code`` token (``E_*``)."""


class EncodabilityError(Exception):
    code = "E_GENERIC"

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context

    def __str__(self):
        return f"{self.code}: {self.args[0]}"


class DisjointnessError(EncodabilityError):
    code = "E_DISJOINT"


class UnknownStateError(EncodabilityError):
    code = "E_UNKNOWN_STATE"


class PartialEncodingError(EncodabilityError):
    code = "E_PARTIAL_ENCODING"


class PreconditionError(EncodabilityError):
    code = "E_PRECONDITION"


class UnknownLemmaError(EncodabilityError):
    code = "E_UNKNOWN_LEMMA"


class TooLargeError(EncodabilityError):
    code = "E_TOO_LARGE"


class UnknownFixtureError(EncodabilityError):
    code = "E_UNKNOWN_FIXTURE"


class ParseError(EncodabilityError):
    code = "E_PARSE"


class UsageError(EncodabilityError):
    code = "E_USAGE"
