"""Error taxonomy.

Every library error carries a stable machine-readable ``code`` (its class
name) and an optional ``witness`` payload; the CLI surfaces both verbatim
and maps any IsolabError to exit status 2.
"""


class IsolabError(Exception):
    """Base class: a violated precondition or an uncertifiable computation."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness

    @property
    def code(self):
        return type(self).__name__

    def to_json(self):
        return {"error": self.code, "witness": self.witness,
                "message": str(self) or None}


# --- scalar arithmetic ---------------------------------------------------

class FrobeniusLiftFailure(IsolabError):
    """Hensel iteration for the Frobenius lift failed to converge."""


class DivisionByZero(IsolabError):
    """Inversion of a value that is zero to working precision."""


class PrecisionExhausted(IsolabError):
    """An operation would leave no certified digits."""


# --- isocrystals ----------------------------------------------------------

class InsufficientPrecision(IsolabError):
    """A required valuation or pivot cannot be certified at precision N."""


class NonInvertible(IsolabError):
    """A determinant (or pivot) is zero to working precision."""


class ResidueFieldTooSmall(IsolabError):
    """Splitting an isoclinic block needs a larger residue field.

    The required degree is reported in ``witness``; the base is never
    extended silently.
    """


class FieldSpecMismatch(IsolabError):
    """Operands live over different coefficient rings."""


# --- Lie-algebra side -----------------------------------------------------

class NotNilpotent(IsolabError):
    """The lower central series stabilized at a nonzero subspace."""


class SlopeOutOfRange(IsolabError):
    """A slope fell outside the admissible window [-1, 0]."""


class SlopeNotStrictlyNegative(IsolabError):
    """An operation requiring strictly negative slopes saw slope >= 0."""


class SplitUnavailable(IsolabError):
    """No F-equivariant complement exists at the working precision."""


class DegreeTooLarge(IsolabError):
    """A series degree beyond the configured bound was requested."""


# --- root data ------------------------------------------------------------

class UnsupportedType(IsolabError):
    """Root-datum type without a matrix realization in scope."""


# --- perfected series -----------------------------------------------------

class ParameterMismatch(IsolabError):
    """Series operands disagree on p, variable count, field or bound."""


class NonzeroConstantTerm(IsolabError):
    """Composition requires substituted series with zero constant term."""


class SequenceTooShort(IsolabError):
    """An empty congruence-degree sequence was supplied."""


class DegreeBoundTooSmall(IsolabError):
    """A requested ideal power exceeds what the degree bound certifies."""


class SlopeOrderViolated(IsolabError):
    """Slope magnitudes supplied in the wrong order (needs 0 < mu0 < mu1 <= 1)."""


class MalformedInput(IsolabError):
    """Input JSON does not match the published schema (CLI exit 1)."""


#: every error the CLI can emit, by code (exit-code contract is exhaustive)
ERROR_CODES = {
    cls.__name__: cls
    for cls in (
        FrobeniusLiftFailure, DivisionByZero, PrecisionExhausted,
        InsufficientPrecision, NonInvertible, ResidueFieldTooSmall,
        FieldSpecMismatch, NotNilpotent, SlopeOutOfRange,
        SlopeNotStrictlyNegative, SplitUnavailable, DegreeTooLarge,
        UnsupportedType, ParameterMismatch, NonzeroConstantTerm,
        SequenceTooShort, DegreeBoundTooSmall, SlopeOrderViolated,
        MalformedInput,
    )
}
