"""HTTP client for the KEGG REST service."""

import logging
import threading
import time

import httpx
import pybreaker
from tenacity import (
    Retrying,
    retry_if_exception_type,
    stop_after_attempt,
    wait_exponential,
)

from clients.kegg_api.config import KeggAPIConfig
from clients.kegg_api.exceptions import (
    CircuitBreakerError,
    KeggAPIError,
    KeggNotFoundError,
    NetworkError,
)

logger = logging.getLogger(__name__)


class RateLimiter:
    """Serializes callers and keeps a minimum gap between their requests."""

    def __init__(self, interval_seconds: float):
        self.interval = max(float(interval_seconds), 0.0)
        self._last_request_time: float | None = None
        self._lock = threading.Lock()

    def __enter__(self):
        self._lock.acquire()
        if self._last_request_time is not None and self.interval > 0:
            elapsed = time.monotonic() - self._last_request_time
            if elapsed < self.interval:
                time.sleep(self.interval - elapsed)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self._last_request_time = time.monotonic()
        self._lock.release()


class KeggAPIClient:
    """HTTP client for the public KEGG REST endpoints."""

    def __init__(
        self,
        config: KeggAPIConfig | None = None,
        transport: httpx.BaseTransport | None = None,
    ):
        """
        Initialize KEGG REST client.

        Args:
            config: API client configuration. Uses defaults if not provided.
            transport: Optional httpx transport, used by tests to count requests.
        """
        self.config = config or KeggAPIConfig()
        self._client = httpx.Client(
            base_url=self.config.base_url,
            timeout=self.config.timeout,
            transport=transport,
        )
        self._rate_limiter = RateLimiter(self.config.min_request_interval)

        self._circuit_breaker = pybreaker.CircuitBreaker(
            fail_max=self.config.circuit_failure_threshold,
            reset_timeout=self.config.circuit_recovery_timeout,
        )

    def __enter__(self):
        """Context manager entry."""
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Context manager exit - close HTTP client."""
        self.close()

    def close(self):
        """Close the HTTP client."""
        self._client.close()

    def list_pathways(self, org_code: str) -> str:
        """Raw ``list/pathway/<org>`` listing (tab-separated id/title lines)."""
        return self._get(f"/list/pathway/{org_code}").text

    def get_kgml(self, pathway_id: str) -> bytes:
        return self._get(f"/get/{pathway_id}/kgml").content

    def get_image(self, pathway_id: str) -> bytes:
        return self._get(f"/get/{pathway_id}/image").content

    def link_ko(self, org_code: str) -> str:
        """Raw ``link/ko/<org>`` table mapping organism genes to KOs."""
        return self._get(f"/link/ko/{org_code}").text

    def _get(self, endpoint: str) -> httpx.Response:
        """
        GET an endpoint through the circuit breaker and retry policy.

        Raises:
            KeggNotFoundError: If KEGG answers 404
            NetworkError: If the request keeps failing at the transport level
            CircuitBreakerError: If the circuit breaker is open
            KeggAPIError: For other non-200 answers
        """
        try:
            response: httpx.Response = self._circuit_breaker.call(
                self._request_with_retry, endpoint
            )
        except pybreaker.CircuitBreakerError as e:
            raise CircuitBreakerError() from e

        if response.status_code == 200:
            return response

        url = str(response.request.url)
        if response.status_code == 404:
            raise KeggNotFoundError(url)

        logger.error(f"KEGG error - Status: {response.status_code}, URL: {url}")
        raise KeggAPIError(
            f"KEGG returned HTTP {response.status_code}",
            status_code=response.status_code,
            url=url,
        )

    def _request_with_retry(self, endpoint: str) -> httpx.Response:
        retrying = Retrying(
            stop=stop_after_attempt(self.config.max_retries),
            wait=wait_exponential(multiplier=1, min=1, max=10),
            retry=retry_if_exception_type(NetworkError),
            reraise=True,
        )
        for attempt in retrying:
            with attempt:
                return self._request(endpoint)
        raise KeggAPIError(f"Request failed: {endpoint}")  # unreachable

    def _request(self, endpoint: str) -> httpx.Response:
        with self._rate_limiter:
            try:
                logger.debug(f"GET {endpoint}")
                return self._client.get(endpoint)

            except (httpx.TimeoutException, httpx.NetworkError) as e:
                logger.warning(f"Network error during GET {endpoint}: {e}")
                raise NetworkError(str(e), url=endpoint, original_error=e) from e
