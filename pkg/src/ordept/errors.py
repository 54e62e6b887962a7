"""Exception types shared across the toolkit."""


class CodingError(Exception):
    """Base class for all toolkit errors."""


class NonPrimitivePolynomial(CodingError):
    """The supplied polynomial does not generate the full multiplicative group."""


class CapacityExceeded(CodingError):
    """Requested parity rows do not fit the field (t*r + 1 >= 2^r)."""


class DegenerateDims(CodingError):
    """Code dimensions degenerate (e.g. n <= deg(gen_poly) for a CRC)."""


class LengthMismatch(CodingError):
    """Vector length does not match the code length."""


class MalformedHeader(CodingError):
    """Parity-check file header is not 'n m'."""


class RowLengthMismatch(CodingError):
    """A parity-check file row does not have exactly n characters."""


class RankDeficient(CodingError):
    """Parity-check matrix rows are linearly dependent over GF(2)."""


class RankOutOfRange(CodingError):
    """A pattern rank exceeds the permutation length."""


class EmptyCandidateList(CodingError):
    """Soft-output update requires at least one candidate codeword."""


class DimensionMismatch(CodingError):
    """Grid dimensions do not match the product-code components."""


class ConfigError(CodingError):
    """Inconsistent or unparseable configuration."""
