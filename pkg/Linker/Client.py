"""Thin HTTP client for a running link service."""

import logging
from typing import Any, Dict, Optional

import requests

from .Engine import LinkRequest
from .Errors import EmptyQueryError, ServiceError

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 30


class LinkClient:
    def __init__(self, base_url: str, timeout: float = DEFAULT_TIMEOUT):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def health(self) -> Dict[str, Any]:
        try:
            r = requests.get(self.base_url + "/health", timeout=self.timeout)
        except requests.RequestException as e:
            raise ServiceError(f"cannot reach {self.base_url}: {e}") from e
        if r.status_code != 200:
            raise ServiceError(f"health check failed with HTTP {r.status_code}", r.status_code)
        return r.json()

    def link_raw(self, request: LinkRequest) -> str:
        """POST /link and return the response body unchanged."""
        url = self.base_url + "/link"
        logger.debug(f"POST {url}")
        try:
            r = requests.post(
                url,
                data=request.model_dump_json(exclude_none=True),
                headers={"Content-Type": "application/json"},
                timeout=self.timeout,
            )
        except requests.RequestException as e:
            raise ServiceError(f"cannot reach {self.base_url}: {e}") from e
        if r.status_code == 422 and _detail(r) == EmptyQueryError().args[0]:
            raise EmptyQueryError()
        if r.status_code != 200:
            raise ServiceError(f"link request failed with HTTP {r.status_code}: {_detail(r)}", r.status_code)
        return r.text


def _detail(response: "requests.Response") -> Optional[str]:
    try:
        detail = response.json().get("detail")
    except ValueError:
        return response.text or None
    return detail if isinstance(detail, str) else str(detail)
