"""Client for OpenAI-compatible ``/v1/chat/completions`` servers."""

from __future__ import annotations

import logging
import os
import threading
import time
from collections import Counter

import httpx

from ..errors import MalformedResponse, TransportError
from .base import BackendConfig, ElicitationRequest
from .parsing import parse
from .templates import render_messages, repair_message

log = logging.getLogger(__name__)

RETRY_STATUS = {408, 409, 425, 429, 500, 502, 503, 504}
API_KEY_ENV = "FRC_API_KEY"


class HttpBackend:
    deterministic = False

    def __init__(self, config: BackendConfig, api_key: str | None = None,
                 client: httpx.Client | None = None, sleep=time.sleep):
        self.config = config
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.backend_id = f"http:{config.model_name}"
        self.concurrency_limit = config.concurrency_limit
        self._client = client or httpx.Client(timeout=config.timeout)
        self._slots = threading.BoundedSemaphore(config.concurrency_limit)
        self._sleep = sleep
        self._lock = threading.Lock()
        self.stats = Counter()

    @property
    def url(self) -> str:
        return self.config.endpoint_url.rstrip("/") + "/v1/chat/completions"

    def request_body(self, messages: list[dict]) -> dict:
        return {"model": self.config.model_name, "messages": messages,
                "temperature": self.config.temperature}

    def _count(self, key):
        with self._lock:
            self.stats[key] += 1

    def complete(self, messages: list[dict]) -> str:
        """POST one chat completion and return ``choices[0].message.content``.

        Retries connection errors, timeouts and 429/5xx statuses with
        exponential backoff, for at most ``max_retries`` attempts in total.
        """
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = self.request_body(messages)
        last = None
        for attempt in range(self.config.max_retries):
            if attempt:
                self._sleep(min(0.25 * 2 ** (attempt - 1), 4.0))
            self._count("attempts")
            try:
                with self._slots:
                    resp = self._client.post(self.url, json=body, headers=headers,
                                             timeout=self.config.timeout)
            except httpx.TransportError as e:
                last = f"{type(e).__name__}: {e}"
                log.warning("attempt %d to %s failed: %s", attempt + 1, self.url, last)
                continue
            if resp.status_code in RETRY_STATUS:
                last = f"HTTP {resp.status_code}"
                log.warning("attempt %d to %s got %s", attempt + 1, self.url, last)
                continue
            if resp.status_code >= 400:
                raise TransportError(f"HTTP {resp.status_code} from {self.url}: {resp.text[:200]}")
            try:
                return resp.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as e:
                raise TransportError(f"unexpected response envelope from {self.url}") from e
        raise TransportError(f"{self.url} unreachable after {self.config.max_retries} attempts ({last})")

    def elicit(self, request: ElicitationRequest):
        self._count(request.kind)
        messages = render_messages(request)
        content = self.complete(messages)
        try:
            return parse(request.kind, content, request.classes, request.context)
        except MalformedResponse as first:
            self._count("reprompts")
            log.info("reprompting after unparsable %s answer: %s", request.kind, first)
            messages = messages + [{"role": "assistant", "content": content},
                                   repair_message(first)]
            content = self.complete(messages)
            try:
                return parse(request.kind, content, request.classes, request.context)
            except MalformedResponse as second:
                raise type(second)(f"{request.kind}: {second} (after one reprompt)",
                                   raw=content) from second

    def close(self):
        self._client.close()
