"""HTTP client for external generation/answering/classification backends.

One JSON-over-POST wire protocol serves all three roles:

    POST /generate  {paragraph, span:{start,end}, label, policy, k, p}
                    -> {candidates:[{question, origin, score}]}
    POST /answer    {paragraph, question}
                    -> {answerable, span:{start,end}?, confidence}
    POST /classify  {questions:[...]} -> {labels:[...]}

plus /generate_batch and /answer_batch for bulk calls. Transport failures
and 5xx replies are retried a bounded number of times; malformed replies
raise a protocol error.
"""

from __future__ import annotations

import time

import requests

from ..errors import ProtocolError, TransportError
from ..taxonomy import SpecificityLabel
from .types import AnswerPrediction, GeneratedQuestion, Origin


class HttpBackend:
    def __init__(self, base_url, timeout=30.0, max_retries=3, backoff=0.1,
                 session=None):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff = backoff
        self.session = session or requests.Session()

    def _post(self, endpoint, payload):
        url = f"{self.base_url}{endpoint}"
        last_error = None
        for attempt in range(1, self.max_retries + 1):
            try:
                response = self.session.post(url, json=payload, timeout=self.timeout)
            except requests.RequestException as exc:
                last_error = f"{type(exc).__name__}: {exc}"
            else:
                if response.status_code >= 500:
                    last_error = f"server error {response.status_code}"
                elif response.status_code >= 400:
                    raise ProtocolError(
                        f"{url} rejected request: {response.status_code} "
                        f"{response.text[:200]}"
                    )
                else:
                    try:
                        return response.json()
                    except ValueError as exc:
                        raise ProtocolError(
                            f"{url} returned non-JSON body: {exc}"
                        ) from exc
            if attempt < self.max_retries:
                # retry on a fresh connection: the server may have closed
                # the pooled one along with the error response
                self.session.close()
                time.sleep(self.backoff * attempt)
        raise TransportError(
            f"{url} unreachable after {self.max_retries} attempts: {last_error}",
            attempts=self.max_retries,
        )

    def _parse_candidate(self, entry):
        try:
            return GeneratedQuestion(
                question=entry["question"],
                origin=Origin(entry["origin"]),
                score=float(entry["score"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"malformed candidate {entry!r}: {exc}") from exc

    def generate(self, request):
        payload = {
            "paragraph": request.paragraph,
            "span": {"start": request.start, "end": request.end},
            "label": request.label.value,
            "policy": request.policy.value,
            "k": request.k,
            "p": request.p,
        }
        reply = self._post("/generate", payload)
        try:
            entries = reply["candidates"]
        except (KeyError, TypeError) as exc:
            raise ProtocolError(f"malformed /generate reply: {reply!r}") from exc
        return [self._parse_candidate(e) for e in entries]

    def _parse_prediction(self, reply, paragraph):
        try:
            answerable = bool(reply["answerable"])
            if not answerable:
                return AnswerPrediction(answerable=False)
            span = reply["span"]
            start, end = int(span["start"]), int(span["end"])
            confidence = float(reply.get("confidence", 0.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"malformed /answer reply: {reply!r}") from exc
        if not (0 <= start < end <= len(paragraph)):
            raise ProtocolError(
                f"predicted span {start}:{end} outside paragraph of length "
                f"{len(paragraph)}"
            )
        return AnswerPrediction(
            answerable=True, start=start, end=end, confidence=confidence
        )

    def answer(self, paragraph, question):
        reply = self._post("/answer", {"paragraph": paragraph, "question": question})
        return self._parse_prediction(reply, paragraph)

    def answer_batch(self, paragraph, questions):
        reply = self._post(
            "/answer_batch", {"paragraph": paragraph, "questions": list(questions)}
        )
        try:
            results = reply["results"]
        except (KeyError, TypeError) as exc:
            raise ProtocolError(f"malformed /answer_batch reply: {reply!r}") from exc
        if len(results) != len(questions):
            raise ProtocolError(
                f"asked for {len(questions)} answers, got {len(results)}"
            )
        return [self._parse_prediction(r, paragraph) for r in results]

    def generate_batch(self, requests_):
        payload = {
            "requests": [
                {
                    "paragraph": r.paragraph,
                    "span": {"start": r.start, "end": r.end},
                    "label": r.label.value,
                    "policy": r.policy.value,
                    "k": r.k,
                    "p": r.p,
                }
                for r in requests_
            ]
        }
        reply = self._post("/generate_batch", payload)
        try:
            results = reply["results"]
        except (KeyError, TypeError) as exc:
            raise ProtocolError(f"malformed /generate_batch reply: {reply!r}") from exc
        if len(results) != len(requests_):
            raise ProtocolError(
                f"sent {len(requests_)} generation requests, got {len(results)} results"
            )
        return [
            [self._parse_candidate(e) for e in r.get("candidates", [])]
            for r in results
        ]

    def classify(self, questions):
        reply = self._post("/classify", {"questions": list(questions)})
        try:
            labels = [SpecificityLabel(l) for l in reply["labels"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"malformed /classify reply: {reply!r}") from exc
        if len(labels) != len(questions):
            raise ProtocolError(
                f"asked to classify {len(questions)} questions, got {len(labels)} labels"
            )
        return labels
