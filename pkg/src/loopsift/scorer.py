"""Scoring backends: the bundled classifier and an external HTTP service.

A scorer turns raw texts into hate-speech probabilities, order-preserving
and batch-oriented.  The HTTP backend speaks a two-endpoint wire contract:

    POST {base}/score   {"texts": [...], "languages": [...]?}
                        -> {"probabilities": [...]}
    GET  {base}/health  -> 200 when ready

Any transport failure, bad status, or malformed payload surfaces as
ScorerUnavailableError so callers can treat the backend as a unit.
"""

from __future__ import annotations

from typing import Protocol, Sequence, runtime_checkable

import httpx

from .errors import ScorerUnavailableError
from .mnb.model import MnbModel, predict_proba
from .textprep import full_tokens


@runtime_checkable
class ScorerBackend(Protocol):
    name: str
    version: str

    def score_batch(
        self, texts: Sequence[str], languages: Sequence[str] | None = None
    ) -> list[float]:
        """One probability per text, same order as the input."""
        ...


class MnbScorer:
    """Scores texts with a trained in-process model."""

    name = "mnb"

    def __init__(self, model: MnbModel, default_language: str = "DE"):
        self._model = model
        self._default_language = default_language

    @property
    def version(self) -> str:
        return self._model.version

    @property
    def model(self) -> MnbModel:
        return self._model

    def score_batch(
        self, texts: Sequence[str], languages: Sequence[str] | None = None
    ) -> list[float]:
        if languages is not None and len(languages) != len(texts):
            raise ScorerUnavailableError(
                f"{len(languages)} languages for {len(texts)} texts"
            )
        out = []
        for i, text in enumerate(texts):
            language = languages[i] if languages else self._default_language
            tokens = full_tokens(text, language)
            out.append(predict_proba(self._model, tokens).probability)
        return out


class ExternalHttpScorer:
    """Client for a remote scoring service speaking the wire contract above."""

    name = "external"

    def __init__(
        self,
        base_url: str,
        *,
        timeout: float = 10.0,
        version: str = "external",
        client: httpx.Client | None = None,
    ):
        self._base_url = base_url.rstrip("/")
        self.version = version
        self._client = client or httpx.Client(timeout=timeout)

    def health(self) -> bool:
        try:
            response = self._client.get(f"{self._base_url}/health")
        except httpx.HTTPError:
            return False
        return response.status_code == 200

    def score_batch(
        self, texts: Sequence[str], languages: Sequence[str] | None = None
    ) -> list[float]:
        payload: dict = {"texts": list(texts)}
        if languages is not None:
            payload["languages"] = list(languages)
        try:
            response = self._client.post(f"{self._base_url}/score", json=payload)
        except httpx.HTTPError as exc:
            raise ScorerUnavailableError(f"scoring request failed: {exc}") from exc
        if response.status_code != 200:
            raise ScorerUnavailableError(
                f"scoring service returned {response.status_code}",
                status=response.status_code,
            )
        try:
            probabilities = response.json()["probabilities"]
        except (ValueError, KeyError) as exc:
            raise ScorerUnavailableError(
                f"malformed scoring response: {exc}"
            ) from exc
        if len(probabilities) != len(texts):
            raise ScorerUnavailableError(
                f"{len(probabilities)} probabilities for {len(texts)} texts"
            )
        out = []
        for value in probabilities:
            number = float(value)
            if not 0.0 <= number <= 1.0:
                raise ScorerUnavailableError(f"probability out of range: {value!r}")
            out.append(number)
        return out

    def close(self) -> None:
        self._client.close()
