"""Backend contract, scripted mock, and an optional HTTP adapter.

A backend answers a :class:`BackendRequest` with a
:class:`BackendAnswer` that carries an explicit confidence; the router
never parses prose for confidence. Transport is up to the
implementation: the in-process mock is the test double, the HTTP
adapter speaks the JSON contract documented in ``docs/protocol.md``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Protocol, Sequence, Tuple

from .policy import DEFAULT_MAX_OUTPUT_TOKENS


class BackendFailure(Exception):
    """A backend call failed; carries the tier for context."""

    def __init__(self, tier: str, message: str) -> None:
        super().__init__(f"[{tier}] {message}")
        self.tier = tier


@dataclass(frozen=True)
class BackendRequest:
    tier: str
    prompt: str
    facts: Tuple[str, ...] = ()
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS


@dataclass(frozen=True)
class BackendAnswer:
    answer: str
    confidence: float
    input_tokens: int = 0
    output_tokens: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.confidence <= 1:
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence!r}")
        if self.input_tokens < 0 or self.output_tokens < 0:
            raise ValueError("token counts must be non-negative")


class Backend(Protocol):
    def complete(self, request: BackendRequest) -> BackendAnswer: ...


@dataclass
class MockBackend:
    """Plays back a script of answers in order, repeating the last one.

    Every request is recorded in ``calls`` for assertions.
    """

    script: Sequence[BackendAnswer]
    calls: List[BackendRequest] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.script:
            raise ValueError("mock backend script must be non-empty")

    def complete(self, request: BackendRequest) -> BackendAnswer:
        index = min(len(self.calls), len(self.script) - 1)
        self.calls.append(request)
        return self.script[index]


def make_mock_backend(script: Sequence[BackendAnswer]) -> MockBackend:
    return MockBackend(list(script))


@dataclass
class FailingBackend:
    """Always raises; useful for exercising failure propagation."""

    message: str = "backend unavailable"

    def complete(self, request: BackendRequest) -> BackendAnswer:
        raise RuntimeError(self.message)


class HttpBackend:
    """POSTs the request to a JSON endpoint.

    Wire contract (see ``docs/protocol.md``): request body
    ``{"model", "prompt", "facts", "max_output_tokens"}``; response body
    ``{"answer", "confidence", "input_tokens", "output_tokens"}``.
    ``api_key``, when set, is sent as a bearer token.
    """

    def __init__(
        self,
        url: str,
        model_id: str,
        api_key: str | None = None,
        timeout: float = 60.0,
        transport: object | None = None,
    ) -> None:
        import httpx

        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        self.url = url
        self.model_id = model_id
        self._client = httpx.Client(headers=headers, timeout=timeout, transport=transport)

    def complete(self, request: BackendRequest) -> BackendAnswer:
        response = self._client.post(
            self.url,
            json={
                "model": self.model_id,
                "prompt": request.prompt,
                "facts": list(request.facts),
                "max_output_tokens": request.max_output_tokens,
            },
        )
        response.raise_for_status()
        body = response.json()
        return BackendAnswer(
            answer=body["answer"],
            confidence=float(body["confidence"]),
            input_tokens=int(body.get("input_tokens", 0)),
            output_tokens=int(body.get("output_tokens", 0)),
        )
