"""Per-writer topic models via collapsed Gibbs LDA and character topic vectors.

One document per chapter. Preprocessing lowercases (per case policy), removes
stopwords / character aliases / user-supplied removal tokens, and drops tokens
shorter than 2 characters; fully emptied chapters stay as empty documents.

Distributions are estimated from the average of post-burn-in count states with
Dirichlet smoothing, so every row is a proper probability vector. The final
token-to-topic assignments are kept so that sub-document spans (character
segments) can be scored by normalized assignment counts.

Stopword/removal files: UTF-8, one token per line. Topic label file:
``index<TAB>name`` (display-only).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from ficnet.corpus import Story, word_tokens
from ficnet.segmentation import NoSegmentsError, Segment


class TopicFitError(Exception):
    """LDA could not be fitted (e.g. every document is empty)."""


@dataclass(frozen=True)
class TopicConfig:
    topics: int = 20
    iterations: int = 1000
    burn_in: int = 500
    doc_topic_prior: float | None = None  # None -> 50 / topics
    topic_word_prior: float = 0.01
    seed: int = 0
    min_token_length: int = 2
    case_insensitive: bool = True

    def __post_init__(self) -> None:
        if self.topics < 1:
            raise ValueError(f"topic count must be >= 1, got {self.topics}")
        if self.doc_topic_prior is not None and self.doc_topic_prior <= 0:
            raise ValueError("doc_topic_prior must be > 0")
        if self.topic_word_prior <= 0:
            raise ValueError("topic_word_prior must be > 0")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0 <= self.burn_in:
            raise ValueError("burn_in must be >= 0")

    @property
    def alpha(self) -> float:
        return 50.0 / self.topics if self.doc_topic_prior is None else self.doc_topic_prior


@dataclass(frozen=True)
class TokenDocument:
    story_id: str
    chapter_index: int
    tokens: tuple[str, ...]
    sentence_indices: tuple[int, ...]  # 1-based, aligned with tokens


def load_token_list(path: str | Path) -> frozenset[str]:
    tokens = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            tokens.add(line)
    return frozenset(tokens)


def load_topic_labels(path: str | Path) -> dict[int, str]:
    labels: dict[int, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'index<TAB>name'")
        labels[int(parts[0])] = parts[1]
    return labels


def character_name_tokens(stories: Iterable[Story], case_insensitive: bool = True) -> set[str]:
    """All roster alias tokens, for the removal set."""
    names = set()
    for story in stories:
        for rec in story.roster:
            for alias in rec.aliases:
                for token in word_tokens(alias):
                    names.add(token.casefold() if case_insensitive else token)
    return names


def preprocess(
    story: Story,
    removal: Iterable[str] = (),
    config: TopicConfig | None = None,
) -> list[TokenDocument]:
    """Tokenize a story into one filtered document per chapter."""
    config = config or TopicConfig()
    fold = (lambda t: t.casefold()) if config.case_insensitive else (lambda t: t)
    removal_set = {fold(t) for t in removal}
    documents = []
    for chapter in story.chapters:
        tokens: list[str] = []
        indices: list[int] = []
        for idx, sentence in enumerate(chapter.sentences, start=1):
            for token in word_tokens(sentence):
                token = fold(token)
                if len(token) < config.min_token_length or token in removal_set:
                    continue
                tokens.append(token)
                indices.append(idx)
        documents.append(
            TokenDocument(
                story_id=story.id,
                chapter_index=chapter.index,
                tokens=tuple(tokens),
                sentence_indices=tuple(indices),
            )
        )
    return documents


@dataclass
class TopicModel:
    vocabulary: tuple[str, ...]
    topic_word: np.ndarray  # (topics, V), rows sum to 1
    doc_topic: np.ndarray  # (D, topics), rows sum to 1
    assignments: tuple[np.ndarray, ...]  # final topic id per token, per document
    documents: tuple[TokenDocument, ...]
    config: TopicConfig

    def document_index(self, story_id: str, chapter_index: int) -> int:
        for i, doc in enumerate(self.documents):
            if doc.story_id == story_id and doc.chapter_index == chapter_index:
                return i
        raise KeyError(f"no document for story {story_id!r} chapter {chapter_index}")

    def top_words(self, topic: int, count: int) -> tuple[str, ...]:
        order = np.argsort(-self.topic_word[topic], kind="stable")
        return tuple(self.vocabulary[i] for i in order[:count])


def fit_lda(documents: Sequence[TokenDocument], config: TopicConfig | None = None) -> TopicModel:
    """Collapsed Gibbs sampling over chapter documents with a seeded generator."""
    config = config or TopicConfig()
    vocabulary = tuple(sorted({t for doc in documents for t in doc.tokens}))
    if not vocabulary:
        raise TopicFitError("all documents are empty after preprocessing")
    word_id = {w: i for i, w in enumerate(vocabulary)}

    t = config.topics
    v = len(vocabulary)
    a = config.alpha
    b = config.topic_word_prior
    rng = np.random.default_rng(config.seed)

    docs = [np.array([word_id[tok] for tok in doc.tokens], dtype=np.int64)
            for doc in documents]
    z = [rng.integers(0, t, size=len(words)) for words in docs]

    n_dk = np.zeros((len(docs), t), dtype=np.float64)
    n_kw = np.zeros((t, v), dtype=np.float64)
    n_k = np.zeros(t, dtype=np.float64)
    for d, words in enumerate(docs):
        for w, k in zip(words, z[d]):
            n_dk[d, k] += 1
            n_kw[k, w] += 1
            n_k[k] += 1

    acc_dk = np.zeros_like(n_dk)
    acc_kw = np.zeros_like(n_kw)
    samples = 0
    for iteration in range(config.iterations):
        for d, words in enumerate(docs):
            zd = z[d]
            doc_counts = n_dk[d]
            for n in range(len(words)):
                w = words[n]
                k = zd[n]
                doc_counts[k] -= 1
                n_kw[k, w] -= 1
                n_k[k] -= 1
                p = (doc_counts + a) * (n_kw[:, w] + b) / (n_k + v * b)
                cdf = np.cumsum(p)
                k = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
                if k >= t:  # guard against fp edge at the top of the cdf
                    k = t - 1
                zd[n] = k
                doc_counts[k] += 1
                n_kw[k, w] += 1
                n_k[k] += 1
        if iteration >= config.burn_in:
            acc_dk += n_dk
            acc_kw += n_kw
            samples += 1
    if samples == 0:  # burn_in >= iterations: fall back to the final state
        acc_dk = n_dk.copy()
        acc_kw = n_kw.copy()
        samples = 1

    topic_word = acc_kw / samples + b
    topic_word /= topic_word.sum(axis=1, keepdims=True)
    doc_topic = acc_dk / samples + a
    doc_topic /= doc_topic.sum(axis=1, keepdims=True)

    return TopicModel(
        vocabulary=vocabulary,
        topic_word=topic_word,
        doc_topic=doc_topic,
        assignments=tuple(zd.copy() for zd in z),
        documents=tuple(documents),
        config=config,
    )


def segment_distribution(
    model: TopicModel, story_id: str, chapter_index: int, start: int, end: int
) -> np.ndarray:
    """Normalized assignment counts over a sentence span of one chapter.

    Spans holding no surviving tokens fall back to the chapter's doc-topic
    distribution (uniform when the whole chapter is empty).
    """
    d = model.document_index(story_id, chapter_index)
    doc = model.documents[d]
    counts = np.zeros(model.config.topics, dtype=np.float64)
    for sentence, topic in zip(doc.sentence_indices, model.assignments[d]):
        if start <= sentence <= end:
            counts[topic] += 1
    total = counts.sum()
    if total == 0:
        return model.doc_topic[d].copy()
    return counts / total


def character_topics(
    model: TopicModel,
    located_segments: Sequence[tuple[str, int, Segment]],
) -> np.ndarray:
    """Length-weighted average of segment distributions for one character.

    ``located_segments`` holds (story_id, chapter_index, segment) triples for
    every kept segment of the character.
    """
    if not located_segments:
        raise NoSegmentsError("character has no segments to derive topics from")
    total_length = sum(seg.length for _, _, seg in located_segments)
    vector = np.zeros(model.config.topics, dtype=np.float64)
    for story_id, chapter_index, seg in located_segments:
        dist = segment_distribution(model, story_id, chapter_index, seg.start, seg.end)
        vector += (seg.length / total_length) * dist
    return vector


def chapter_topic_vectors(
    model: TopicModel,
    story_id: str,
    chapter_index: int,
    segments: Mapping[str, Sequence[Segment]],
) -> dict[str, tuple[float, ...]]:
    """Per-character topic vectors restricted to one chapter's segments."""
    vectors = {}
    for cid, segs in segments.items():
        if segs:
            located = [(story_id, chapter_index, seg) for seg in segs]
            vectors[cid] = tuple(character_topics(model, located))
    return vectors
