"""Exceptions for the KEGG REST client and fixture loader."""


class KeggAPIError(Exception):
    """Base exception for KEGG retrieval errors."""

    def __init__(self, message: str, status_code: int | None = None, url: str | None = None):
        self.status_code = status_code
        self.url = url
        super().__init__(message)


class KeggNotFoundError(KeggAPIError):
    """KEGG answered 404 for a resource."""

    def __init__(self, url: str):
        super().__init__(f"KEGG resource not found: {url}", status_code=404, url=url)


class NetworkError(KeggAPIError):
    """Network-related error (timeout, connection failure, etc.)."""

    def __init__(self, detail: str, url: str | None = None, original_error: Exception | None = None):
        self.detail = detail
        self.original_error = original_error
        super().__init__(f"Network error: {detail}", url=url)


class CircuitBreakerError(KeggAPIError):
    """Circuit breaker is open, preventing requests."""

    def __init__(self):
        super().__init__(
            "Circuit breaker is open - too many KEGG failures. Please try again later."
        )


class FixtureMissing(KeggAPIError):
    """Offline mode asked for an artifact that is not on disk."""

    def __init__(self, path: str):
        self.path = path
        super().__init__(f"Offline fixture missing: {path}")
