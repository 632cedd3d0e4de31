"""Chat-completion service client (aiohttp) with retries and a response cache."""
import asyncio
import logging
import os
from typing import Any, Dict, List, Mapping, Optional

import aiohttp

from ..constants import (
    DEFAULT_SERVICE_RETRIES,
    DEFAULT_SERVICE_TIMEOUT,
    ENV_LLM_API_KEY,
    ENV_LLM_ENDPOINT,
    ENV_LLM_MODEL,
    ENV_LLM_RETRIES,
    ENV_LLM_TIMEOUT,
)
from ..exceptions import ConfigError, ServiceError
from ..utils import content_hash
from .cache import ResponseCache

_LOGGER = logging.getLogger(__name__)

Messages = List[Dict[str, str]]


def _env_int(environ: Mapping[str, str], name: str, default: int) -> int:
    raw = environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from e


class ChatServiceClient:
    """Generic chat-completion HTTP client.

    POSTs {"model", "messages", "temperature"} to the endpoint and reads
    choices[0].message.content from the reply.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: Optional[str] = None,
        timeout: int = DEFAULT_SERVICE_TIMEOUT,
        retries: int = DEFAULT_SERVICE_RETRIES,
        cache: Optional[ResponseCache] = None,
    ):
        """Initialize the client.

        Args:
            endpoint: Full URL of the chat-completion route
            model: Model name sent with every request
            api_key: Bearer token, if the service needs one
            timeout: Per-request timeout in seconds
            retries: Extra attempts after a failed request
            cache: Optional response cache for offline replays
        """
        if not endpoint or not model:
            raise ConfigError("service endpoint and model are required")
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.timeout = timeout
        self.retries = max(0, retries)
        self.cache = cache

    @classmethod
    def from_env(
        cls,
        cache_dir: Optional[str] = None,
        environ: Optional[Mapping[str, str]] = None,
    ) -> "ChatServiceClient":
        """Build a client from DRIFT_LLM_* environment variables."""
        environ = os.environ if environ is None else environ
        endpoint = environ.get(ENV_LLM_ENDPOINT)
        model = environ.get(ENV_LLM_MODEL)
        if not endpoint:
            raise ConfigError(f"{ENV_LLM_ENDPOINT} is not set")
        if not model:
            raise ConfigError(f"{ENV_LLM_MODEL} is not set")
        return cls(
            endpoint=endpoint,
            model=model,
            api_key=environ.get(ENV_LLM_API_KEY) or None,
            timeout=_env_int(environ, ENV_LLM_TIMEOUT, DEFAULT_SERVICE_TIMEOUT),
            retries=_env_int(environ, ENV_LLM_RETRIES, DEFAULT_SERVICE_RETRIES),
            cache=ResponseCache(cache_dir) if cache_dir else None,
        )

    def request_body(self, messages: Messages, temperature: float) -> Dict[str, Any]:
        return {"model": self.model, "messages": messages, "temperature": temperature}

    def cache_key(self, body: Dict[str, Any], attempt: int = 0) -> str:
        return content_hash({"endpoint": self.endpoint, "body": body, "attempt": attempt})

    def _headers(self) -> Dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    async def _post(self, body: Dict[str, Any]) -> str:
        async with aiohttp.ClientSession() as session:
            async with session.post(
                self.endpoint,
                json=body,
                headers=self._headers(),
                timeout=aiohttp.ClientTimeout(total=self.timeout),
            ) as response:
                if response.status != 200:
                    text = await response.text()
                    raise ServiceError(f"service returned HTTP {response.status}: {text[:200]}")
                data = await response.json()

        try:
            content = data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as e:
            raise ServiceError(f"unexpected service reply shape: {e}") from e
        if not isinstance(content, str):
            raise ServiceError("service reply content is not a string")
        return content

    async def async_complete(self, messages: Messages, temperature: float = 0.0, attempt: int = 0) -> str:
        """Send one chat request and return the reply text.

        `attempt` is part of the cache key so a deliberate re-ask after a bad
        reply is not served from cache.
        """
        body = self.request_body(messages, temperature)
        key = self.cache_key(body, attempt)

        if self.cache is not None:
            cached = self.cache.get(key)
            if cached is not None:
                return cached["response"]["content"]

        last_error: Optional[Exception] = None
        for try_number in range(self.retries + 1):
            try:
                content = await self._post(body)
                break
            except (aiohttp.ClientError, asyncio.TimeoutError, ServiceError) as e:
                last_error = e
                _LOGGER.warning(
                    "Service request failed (try %d/%d): %s", try_number + 1, self.retries + 1, e
                )
        else:
            raise ServiceError(f"service unavailable after {self.retries + 1} tries: {last_error}")

        if self.cache is not None:
            self.cache.put(key, {"request": body, "response": {"content": content}})
        return content

    def complete(self, messages: Messages, temperature: float = 0.0, attempt: int = 0) -> str:
        return asyncio.run(self.async_complete(messages, temperature, attempt))


def system_user(system: str, user: str) -> Messages:
    return [{"role": "system", "content": system}, {"role": "user", "content": user}]
