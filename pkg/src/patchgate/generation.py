"""Candidate patch sampling with deterministic record/replay.

Live provider responses are captured in an append-only JSON-lines cassette
keyed by a content hash of the request, so every downstream stage is a pure
function of files on disk.
"""

from __future__ import annotations

import hashlib
import json
import re
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from .corpus import Problem, normalize_newlines
from .errors import CassetteConflict, CassetteMiss, ProviderError, TemplateError

PLACEHOLDER = "<code>"

DEFAULT_PROMPT_TEMPLATE = (
    "The following code contains an error. "
    "Please fix the error and provide the correct working version:\n"
    "\n"
    "```python\n"
    "<code>\n"
    "```\n"
)

DEFAULT_TEMPERATURES = (0.0, 0.5, 1.0)
DEFAULT_TRIALS = 3

RETRY_ATTEMPTS = 3
RETRY_BACKOFF_S = 1.0

_FENCE_RE = re.compile(r"```[^\n]*\n(.*?)(?:```|\Z)", re.DOTALL)


@dataclass(frozen=True)
class SamplingPlan:
    temperatures: tuple[float, ...] = DEFAULT_TEMPERATURES
    trials_per_temperature: int = DEFAULT_TRIALS
    prompt_template: str = DEFAULT_PROMPT_TEMPLATE
    model_id: str = "gpt-4"

    def __post_init__(self) -> None:
        if not self.temperatures:
            raise ValueError("temperatures must be non-empty")
        for t in self.temperatures:
            if not (0.0 <= t <= 2.0):
                raise ValueError(f"temperature out of range: {t}")
        if self.trials_per_temperature < 1:
            raise ValueError("trials_per_temperature must be >= 1")


@dataclass(frozen=True)
class PatchCandidate:
    problem_name: str
    temperature: float
    trial_index: int
    raw_response: str
    extracted_code: str
    cassette_key: str


def render_prompt(template: str, problem: Problem) -> str:
    """Substitute the problem's buggy source for the single code placeholder."""
    occurrences = template.count(PLACEHOLDER)
    if occurrences != 1:
        raise TemplateError(
            f"template must contain exactly one {PLACEHOLDER!r} placeholder, found {occurrences}"
        )
    return template.replace(PLACEHOLDER, problem.buggy_source)


def _looks_like_code(line: str) -> bool:
    stripped = line.strip()
    if not stripped:
        return True  # blank lines are neutral; outer strip handles them
    if line[:1] in (" ", "\t"):
        return True
    if stripped.endswith(":"):
        return True
    first_word = stripped.split()[0]
    if first_word in {
        "def", "class", "import", "from", "return", "yield", "if", "elif",
        "else:", "for", "while", "try:", "except", "finally:", "with",
        "assert", "raise", "pass", "break", "continue", "lambda", "print",
        "@", "#",
    } or stripped.startswith(("@", "#")):
        return True
    return any(ch in stripped for ch in "=(){}[]")


def extract_code(raw_response: str) -> str:
    """Isolate patch code from a chat response.

    The contents of the last fenced code block win; without fences, clearly
    prose-looking lines are trimmed from both ends. Output is LF-normalized
    with per-line trailing whitespace removed.
    """
    text = normalize_newlines(raw_response)
    blocks = _FENCE_RE.findall(text)
    if blocks:
        body = blocks[-1]
    else:
        lines = text.split("\n")
        while lines and not _looks_like_code(lines[0]):
            lines.pop(0)
        while lines and not _looks_like_code(lines[-1]):
            lines.pop()
        body = "\n".join(lines)
    cleaned = "\n".join(line.rstrip() for line in body.split("\n"))
    return cleaned.strip("\n")


def cassette_key(model_id: str, temperature: float, prompt: str, trial_index: int) -> str:
    payload = json.dumps(
        [model_id, temperature, prompt, trial_index], ensure_ascii=False, separators=(",", ":")
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def request_digest(model_id: str, temperature: float, prompt: str) -> str:
    body = json.dumps(
        {
            "model": model_id,
            "temperature": temperature,
            "messages": [{"role": "user", "content": prompt}],
        },
        ensure_ascii=False,
        sort_keys=True,
    )
    return hashlib.sha256(body.encode("utf-8")).hexdigest()


class Cassette:
    """Append-only store of provider responses, one JSON object per line."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self.entries: dict[str, dict] = {}
        if self.path.exists():
            with self.path.open(encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    entry = json.loads(line)
                    self.entries[entry["key"]] = entry

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def response_for(self, key: str) -> str | None:
        entry = self.entries.get(key)
        return None if entry is None else entry["response_text"]

    def digest(self) -> str:
        """Content hash over keys and responses, independent of record times."""
        h = hashlib.sha256()
        for key in sorted(self.entries):
            h.update(key.encode("ascii"))
            h.update(self.entries[key]["response_text"].encode("utf-8"))
        return h.hexdigest()

    def append(self, key: str, digest: str, response_text: str, recorded_at: str | None = None) -> None:
        existing = self.entries.get(key)
        if existing is not None:
            if existing["response_text"] != response_text:
                raise CassetteConflict(f"key {key} already recorded with a different response")
            return
        entry = {
            "key": key,
            "request_digest": digest,
            "response_text": response_text,
            "recorded_at": recorded_at or datetime.now(timezone.utc).isoformat(),
        }
        self.entries[key] = entry
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(entry, ensure_ascii=False) + "\n")


class ReplayProvider:
    """Serves responses from a cassette; never touches the network."""

    def __init__(self, cassette: Cassette) -> None:
        self.cassette = cassette

    def complete(self, model_id, temperature, prompt, trial_index, key, context=""):
        response = self.cassette.response_for(key)
        if response is None:
            raise CassetteMiss(key, context)
        return response


class HTTPProvider:
    """Minimal chat-completion client with bounded exponential-backoff retry."""

    def __init__(self, base_url: str, api_key: str) -> None:
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key

    def complete(self, model_id, temperature, prompt, trial_index, key, context=""):
        body = json.dumps(
            {
                "model": model_id,
                "temperature": temperature,
                "messages": [{"role": "user", "content": prompt}],
            }
        ).encode("utf-8")
        request = urllib.request.Request(
            f"{self.base_url}/chat/completions",
            data=body,
            headers={
                "Content-Type": "application/json",
                "Authorization": f"Bearer {self.api_key}",
            },
        )
        last_error: Exception | None = None
        for attempt in range(RETRY_ATTEMPTS):
            try:
                with urllib.request.urlopen(request, timeout=120) as resp:
                    payload = json.loads(resp.read().decode("utf-8"))
                return payload["choices"][0]["message"]["content"]
            except (urllib.error.URLError, KeyError, json.JSONDecodeError, TimeoutError) as exc:
                last_error = exc
                if attempt < RETRY_ATTEMPTS - 1:
                    time.sleep(RETRY_BACKOFF_S * (2**attempt))
        raise ProviderError(f"provider failed after {RETRY_ATTEMPTS} attempts: {last_error}")


class RecordingProvider:
    """Wraps a live provider, appending every response to a cassette."""

    def __init__(self, inner, cassette: Cassette) -> None:
        self.inner = inner
        self.cassette = cassette

    def complete(self, model_id, temperature, prompt, trial_index, key, context=""):
        response = self.inner.complete(model_id, temperature, prompt, trial_index, key, context)
        self.cassette.append(key, request_digest(model_id, temperature, prompt), response)
        return response


def sample_patches(problem: Problem, plan: SamplingPlan, provider) -> list[PatchCandidate]:
    """Sample one candidate per (temperature, trial); deterministic order."""
    prompt = render_prompt(plan.prompt_template, problem)
    candidates: list[PatchCandidate] = []
    for temperature in plan.temperatures:
        for trial in range(plan.trials_per_temperature):
            key = cassette_key(plan.model_id, temperature, prompt, trial)
            context = f"problem={problem.name} temperature={temperature} trial={trial}"
            raw = provider.complete(plan.model_id, temperature, prompt, trial, key, context)
            candidates.append(
                PatchCandidate(
                    problem_name=problem.name,
                    temperature=temperature,
                    trial_index=trial,
                    raw_response=raw,
                    extracted_code=extract_code(raw),
                    cassette_key=key,
                )
            )
    return candidates
