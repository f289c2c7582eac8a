class PathmapError(Exception):
    """Base exception for all pathmap operations."""

    def __init__(self, message: str, source: str | None = None):
        self.source = source
        if source:
            message = f"{message} (source: {source})"
        super().__init__(message)


class ConfigurationError(PathmapError):
    """Error in run configuration."""

    def __init__(self, message: str, config_field: str | None = None):
        self.config_field = config_field
        if config_field:
            message = f"Configuration error in '{config_field}': {message}"
        super().__init__(message)


# ----- input parsing -----


class InputParseError(PathmapError):
    """Base error for TSV input files. Always names a line."""

    def __init__(self, message: str, line_no: int, source: str | None = None):
        self.line_no = line_no
        super().__init__(f"Line {line_no}: {message}", source)


class EmptyFile(InputParseError):
    """File holds no data rows."""

    def __init__(self, source: str | None = None):
        super().__init__("file contains no data rows", 0, source)


class DuplicateGene(InputParseError):
    def __init__(self, gene_id: str, line_no: int, source: str | None = None):
        self.gene_id = gene_id
        super().__init__(f"duplicate gene id '{gene_id}'", line_no, source)


class DuplicateCondition(InputParseError):
    def __init__(self, label: str, line_no: int, source: str | None = None):
        self.label = label
        super().__init__(f"duplicate condition label '{label}'", line_no, source)


class RaggedRow(InputParseError):
    def __init__(
        self, line_no: int, expected: int, found: int, source: str | None = None
    ):
        self.expected = expected
        self.found = found
        super().__init__(
            f"expected {expected} columns, found {found}", line_no, source
        )


class NonNumericValue(InputParseError):
    def __init__(
        self, line_no: int, column: int, token: str, source: str | None = None
    ):
        self.column = column
        self.token = token
        super().__init__(
            f"column {column}: '{token}' is not a number", line_no, source
        )


class NegativeValue(InputParseError):
    def __init__(
        self, line_no: int, column: int, token: str, source: str | None = None
    ):
        self.column = column
        self.token = token
        super().__init__(
            f"column {column}: '{token}' is negative or not finite", line_no, source
        )


class MalformedKoId(InputParseError):
    def __init__(self, line_no: int, token: str, source: str | None = None):
        self.token = token
        super().__init__(f"'{token}' is not a KO identifier", line_no, source)


class ConflictingNamespace(InputParseError):
    def __init__(
        self,
        term_id: str,
        first: str,
        second: str,
        line_no: int,
        source: str | None = None,
    ):
        self.term_id = term_id
        self.namespaces = (first, second)
        super().__init__(
            f"term '{term_id}' assigned to namespaces '{first}' and '{second}'",
            line_no,
            source,
        )


class UnknownNamespace(InputParseError):
    def __init__(
        self,
        namespace: str,
        declared: list[str],
        line_no: int,
        source: str | None = None,
    ):
        self.namespace = namespace
        self.declared = declared
        super().__init__(
            f"namespace '{namespace}' not declared in header {declared}",
            line_no,
            source,
        )


# ----- KGML / images -----


class KgmlError(PathmapError):
    """Base error for KGML documents."""


class XmlSyntax(KgmlError):
    def __init__(self, position: tuple[int, int], detail: str, source: str | None = None):
        self.position = position
        super().__init__(
            f"XML syntax error at line {position[0]}, column {position[1]}: {detail}",
            source,
        )


class MissingAttribute(KgmlError):
    def __init__(self, element: str, attr: str, source: str | None = None):
        self.element = element
        self.attr = attr
        super().__init__(f"<{element}> is missing attribute '{attr}'", source)


class BadCoordinate(KgmlError):
    def __init__(self, entry_id: str, detail: str, source: str | None = None):
        self.entry_id = entry_id
        super().__init__(f"entry {entry_id}: {detail}", source)


class ImageDecodeError(PathmapError):
    """Pathway diagram bytes are not a decodable PNG."""


class DimensionMismatch(PathmapError):
    def __init__(
        self, entry_id: str, image_size: tuple[int, int], source: str | None = None
    ):
        self.entry_id = entry_id
        self.image_size = image_size
        super().__init__(
            f"entry {entry_id} exceeds image bounds {image_size[0]}x{image_size[1]}",
            source,
        )


# ----- statistics -----


class StatisticsError(PathmapError):
    """Base error for enrichment statistics."""


class DomainError(StatisticsError):
    """Arguments outside the domain of a distribution or procedure."""


class EmptyUniverse(StatisticsError):
    def __init__(self):
        super().__init__("the gene universe is empty")


class EmptyValues(PathmapError):
    def __init__(self):
        super().__init__("cannot build a quantile scale from zero values")


# ----- profiles -----


class ProfileError(PathmapError):
    """Base error for time-series profile classification."""


class TooFewTimePoints(ProfileError):
    def __init__(self, found: int):
        self.found = found
        super().__init__(f"at least 2 time points are required, found {found}")


class EmptyReplicateGroup(ProfileError):
    def __init__(self, time_point: str):
        self.time_point = time_point
        super().__init__(f"time point '{time_point}' has no replicate values")


class DesignError(ProfileError):
    """Time-series design inconsistent with the expression matrix."""


# ----- output -----


class IoError(PathmapError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"I/O failed for '{path}': {message}")
