"""Corpus ingestion: manifests, rosters, chapter/sentence splitting, occurrence matching.

File formats
------------
Manifest (YAML, paths relative to the manifest file)::

    writers:
      - id: bc                      # short id used by stories
        name: Bankim Chandra
        career: [1865, 1885]        # optional [first, last] publication year
    stories:
      - id: poison_tree
        title: The Poison Tree
        writer: bc
        year: 1873                  # optional; must fall inside the writer's career
        genres: [social, romantic]  # subset of social/political/romantic/historical
        text: texts/poison_tree.txt
        roster: rosters/poison_tree.yaml
        segmentation: {delta_a: 5}  # optional per-story threshold overrides
    config:                         # optional, applies to every story
      chapter_delimiter: '^\\s*###\\s*$'
      terminators: ["।", "?", "!", "."]
      suffixes: ["কে", "র"]
      case_insensitive: true

Roster (YAML, one file per story)::

    co_protagonists: false          # optional; allows >1 protagonist when true
    characters:
      - id: nagendra
        name: "নগেন্দ্র"
        aliases: ["নগেন্দ্রনাথ"]   # canonical name is always implied
        gender: male                # male | female
        age_group: A2               # A1 (<20) | A2 (20-40) | A3 (>40)
        role: protagonist           # protagonist | antagonist | regular
        family_status: none         # optional: father/mother/uncle/aunt/brother/other/none
        religion: hindu             # optional free string
        social_status: wealthy      # optional: poor/wealthy/landlord/other

Unknown keys are rejected in both files. Story text files are UTF-8 plain text;
a line matching ``chapter_delimiter`` (default: a line that is exactly ``###``)
closes the current chapter. Text before the first delimiter is chapter 1;
blocks with no sentences are dropped.

Alias matching is whole-token: a token matches a character when it equals one
of the character's aliases, or equals an alias followed by exactly one
configured suffix. Matching is case-insensitive by default (a no-op for
unicameral scripts such as Bengali). Aliases that tokenize to more than one
word can never match and are reported with a warning at load time.
"""

from __future__ import annotations

import logging
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import yaml

log = logging.getLogger(__name__)

GENRES = frozenset({"social", "political", "romantic", "historical"})
GENDERS = ("male", "female")
AGE_GROUPS = ("A1", "A2", "A3")
ROLES = ("protagonist", "antagonist", "regular")
FAMILY_STATUSES = ("father", "mother", "uncle", "aunt", "brother", "other", "none")
SOCIAL_STATUSES = ("poor", "wealthy", "landlord", "other")

DEFAULT_TERMINATORS = ("।", "?", "!", ".")  # danda, ?, !, .
DEFAULT_CHAPTER_DELIMITER = r"^\s*###\s*$"


class CorpusError(Exception):
    """A manifest, roster, or story file failed validation."""


@dataclass(frozen=True)
class TextConfig:
    """Tokenizer/matcher configuration shared by every story of a corpus."""

    terminators: tuple[str, ...] = DEFAULT_TERMINATORS
    chapter_delimiter: str = DEFAULT_CHAPTER_DELIMITER
    suffixes: tuple[str, ...] = ()
    case_insensitive: bool = True

    def fold(self, token: str) -> str:
        return token.casefold() if self.case_insensitive else token


@dataclass(frozen=True)
class WriterEntry:
    id: str
    name: str
    career: tuple[int, int] | None = None


@dataclass(frozen=True)
class StoryEntry:
    id: str
    title: str
    writer: str
    year: int | None
    genres: frozenset[str]
    text_path: Path
    roster_path: Path
    seg_override: Mapping[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class CharacterRecord:
    id: str
    canonical_name: str
    aliases: tuple[str, ...]  # always contains the canonical name
    gender: str
    age_group: str
    role: str
    family_status: str = "none"
    religion: str | None = None
    social_status: str | None = None


@dataclass(frozen=True)
class Chapter:
    index: int  # 1-based
    sentences: tuple[str, ...]

    @property
    def length(self) -> int:
        """Chapter length in sentences."""
        return len(self.sentences)


@dataclass(frozen=True)
class Story:
    entry: StoryEntry
    roster: tuple[CharacterRecord, ...]
    chapters: tuple[Chapter, ...]
    co_protagonists: bool = False

    @property
    def id(self) -> str:
        return self.entry.id

    def roster_by_id(self) -> dict[str, CharacterRecord]:
        return {rec.id: rec for rec in self.roster}


@dataclass(frozen=True)
class Corpus:
    root: Path
    writers: tuple[WriterEntry, ...]
    stories: tuple[Story, ...]
    config: TextConfig

    def writer(self, writer_id: str) -> WriterEntry:
        for w in self.writers:
            if w.id == writer_id:
                return w
        raise KeyError(writer_id)

    def stories_by_writer(self, writer_id: str) -> tuple[Story, ...]:
        return tuple(s for s in self.stories if s.entry.writer == writer_id)


class OccurrenceMatrix:
    """Per character: 1-based sentence indices and alias-match counts.

    ``counts[cid][sentence]`` is the number of tokens in that sentence matching
    the character (the "addressed" tally); every roster character is present as
    a key, possibly with an empty mapping.
    """

    def __init__(self, counts: Mapping[str, Mapping[int, int]]):
        self._counts = {cid: dict(c) for cid, c in counts.items()}

    def characters(self) -> tuple[str, ...]:
        return tuple(sorted(self._counts))

    def sentences(self, character_id: str) -> tuple[int, ...]:
        return tuple(sorted(self._counts[character_id]))

    def count(self, character_id: str, sentence: int) -> int:
        return self._counts[character_id].get(sentence, 0)

    def present(self, character_id: str, sentence: int) -> bool:
        return sentence in self._counts[character_id]

    def total_addressed(self, character_id: str, start: int, end: int) -> int:
        """Total alias matches for the character within sentences [start, end]."""
        c = self._counts[character_id]
        return sum(n for s, n in c.items() if start <= s <= end)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, OccurrenceMatrix) and self._counts == other._counts


def word_tokens(text: str) -> list[str]:
    """Split text into word tokens: maximal runs of letters, marks, or digits.

    Unicode combining marks are kept inside tokens, which ``\\w`` would split
    for scripts like Bengali.
    """
    tokens: list[str] = []
    current: list[str] = []
    for ch in text:
        if unicodedata.category(ch)[0] in ("L", "M", "N"):
            current.append(ch)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    return tokens


def split_sentences(text: str, config: TextConfig | None = None) -> list[str]:
    """Split chapter text into sentences on the configured terminator set.

    A maximal run of terminator characters closes a sentence and stays with
    it; trailing text without a terminator forms a final sentence. Whitespace
    around sentences is stripped and empty pieces are dropped.
    """
    config = config or TextConfig()
    if not text:
        return []
    if not config.terminators:
        stripped = text.strip()
        return [stripped] if stripped else []
    term = "".join(re.escape(t) for t in config.terminators)
    pattern = re.compile(rf"[^{term}]*[{term}]+|[^{term}]+")
    sentences = []
    for piece in pattern.findall(text):
        piece = piece.strip()
        if piece:
            sentences.append(piece)
    return sentences


def split_chapters(text: str, config: TextConfig | None = None) -> list[list[str]]:
    """Split story text into chapters (lists of sentences) on delimiter lines."""
    config = config or TextConfig()
    delimiter = re.compile(config.chapter_delimiter)
    blocks: list[list[str]] = [[]]
    for line in text.splitlines():
        if delimiter.match(line):
            blocks.append([])
        else:
            blocks[-1].append(line)
    chapters = []
    for block in blocks:
        sentences = split_sentences("\n".join(block), config)
        if sentences:
            chapters.append(sentences)
    return chapters


def _alias_forms(
    roster: Sequence[CharacterRecord], config: TextConfig
) -> dict[str, set[str]]:
    """Map every matchable token form (alias or alias+suffix) to character ids.

    Raises CorpusError when two characters share an alias, since attribution
    would be ambiguous.
    """
    owner: dict[str, str] = {}
    forms: dict[str, set[str]] = {}
    for rec in roster:
        for alias in rec.aliases:
            folded = config.fold(alias)
            prior = owner.get(folded)
            if prior is not None and prior != rec.id:
                raise CorpusError(
                    f"alias {alias!r} is shared by characters "
                    f"{prior!r} and {rec.id!r}; attribution is ambiguous"
                )
            owner[folded] = rec.id
            forms.setdefault(folded, set()).add(rec.id)
            for suffix in config.suffixes:
                forms.setdefault(folded + config.fold(suffix), set()).add(rec.id)
    return forms


def find_occurrences(
    chapter: Chapter,
    roster: Sequence[CharacterRecord],
    config: TextConfig | None = None,
) -> OccurrenceMatrix:
    """Match roster aliases against every sentence of a chapter.

    A character occurs in a sentence iff some token equals one of its aliases
    or an alias plus one configured suffix. The per-sentence match count feeds
    the "addressed" tallies used by weights and importances.
    """
    config = config or TextConfig()
    forms = _alias_forms(roster, config)
    counts: dict[str, dict[int, int]] = {rec.id: {} for rec in roster}
    for idx, sentence in enumerate(chapter.sentences, start=1):
        for token in word_tokens(sentence):
            for cid in forms.get(config.fold(token), ()):
                per = counts[cid]
                per[idx] = per.get(idx, 0) + 1
    return OccurrenceMatrix(counts)


# ---------------------------------------------------------------------------
# Manifest / roster loading


def _as_mapping(value: Any, context: str) -> Mapping[str, Any]:
    if not isinstance(value, Mapping):
        raise CorpusError(f"{context}: expected a mapping, got {type(value).__name__}")
    return value


def _check_keys(
    mapping: Mapping[str, Any], allowed: Iterable[str], required: Iterable[str], context: str
) -> None:
    allowed = set(allowed)
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise CorpusError(f"{context}: unknown key(s) {', '.join(map(repr, unknown))}")
    missing = sorted(set(required) - set(mapping))
    if missing:
        raise CorpusError(f"{context}: missing required key(s) {', '.join(map(repr, missing))}")


def _str_field(mapping: Mapping[str, Any], key: str, context: str) -> str:
    value = mapping.get(key)
    if not isinstance(value, str) or not value.strip():
        raise CorpusError(f"{context}: field {key!r} must be a non-empty string")
    return value


def _enum_field(
    mapping: Mapping[str, Any], key: str, domain: Sequence[str], context: str
) -> str:
    value = _str_field(mapping, key, context)
    if value not in domain:
        raise CorpusError(
            f"{context}: field {key!r} has unknown value {value!r}; "
            f"expected one of {'/'.join(domain)}"
        )
    return value


def parse_roster(data: Any, story_id: str) -> tuple[tuple[CharacterRecord, ...], bool]:
    """Validate roster YAML data into CharacterRecords."""
    context = f"story {story_id!r}: roster"
    data = _as_mapping(data, context)
    _check_keys(data, ("characters", "co_protagonists"), ("characters",), context)
    co_protagonists = bool(data.get("co_protagonists", False))
    raw_records = data["characters"]
    if not isinstance(raw_records, Sequence) or isinstance(raw_records, str) or not raw_records:
        raise CorpusError(f"{context}: 'characters' must be a non-empty list")

    records: list[CharacterRecord] = []
    seen_ids: set[str] = set()
    for i, raw in enumerate(raw_records):
        ctx = f"story {story_id!r}: character #{i + 1}"
        raw = _as_mapping(raw, ctx)
        _check_keys(
            raw,
            ("id", "name", "aliases", "gender", "age_group", "role",
             "family_status", "religion", "social_status"),
            ("id", "name", "gender", "age_group", "role"),
            ctx,
        )
        cid = _str_field(raw, "id", ctx)
        if any(ch.isspace() for ch in cid):
            raise CorpusError(f"{ctx}: field 'id' must not contain whitespace")
        if cid in seen_ids:
            raise CorpusError(f"story {story_id!r}: duplicate character id {cid!r}")
        seen_ids.add(cid)
        ctx = f"story {story_id!r}: character {cid!r}"
        name = _str_field(raw, "name", ctx)
        raw_aliases = raw.get("aliases", [])
        if isinstance(raw_aliases, str) or not isinstance(raw_aliases, Sequence):
            raise CorpusError(f"{ctx}: field 'aliases' must be a list of strings")
        aliases: list[str] = [name]
        for alias in raw_aliases:
            if not isinstance(alias, str) or not alias.strip():
                raise CorpusError(f"{ctx}: field 'aliases' contains a blank entry")
            if alias not in aliases:
                aliases.append(alias)
        for alias in aliases:
            if len(word_tokens(alias)) != 1:
                log.warning(
                    "story %r: character %r: alias %r is not a single token "
                    "and will never match", story_id, cid, alias,
                )
        gender = _enum_field(raw, "gender", GENDERS, ctx)
        age_group = _enum_field(raw, "age_group", AGE_GROUPS, ctx)
        role = _enum_field(raw, "role", ROLES, ctx)
        family = raw.get("family_status")
        if family is None:
            family = "none"
        elif family not in FAMILY_STATUSES:
            raise CorpusError(
                f"{ctx}: field 'family_status' has unknown value {family!r}; "
                f"expected one of {'/'.join(FAMILY_STATUSES)}"
            )
        religion = raw.get("religion")
        if religion is not None and (not isinstance(religion, str) or not religion.strip()):
            raise CorpusError(f"{ctx}: field 'religion' must be a non-empty string")
        social = raw.get("social_status")
        if social is not None and social not in SOCIAL_STATUSES:
            raise CorpusError(
                f"{ctx}: field 'social_status' has unknown value {social!r}; "
                f"expected one of {'/'.join(SOCIAL_STATUSES)}"
            )
        records.append(
            CharacterRecord(
                id=cid,
                canonical_name=name,
                aliases=tuple(aliases),
                gender=gender,
                age_group=age_group,
                role=role,
                family_status=family,
                religion=religion,
                social_status=social,
            )
        )

    protagonists = [r.id for r in records if r.role == "protagonist"]
    if len(protagonists) > 1 and not co_protagonists:
        raise CorpusError(
            f"story {story_id!r}: multiple protagonists {protagonists} "
            "without co_protagonists flag"
        )
    return tuple(records), co_protagonists


def _parse_text_config(data: Any) -> TextConfig:
    context = "manifest: config"
    data = _as_mapping(data, context)
    _check_keys(
        data,
        ("terminators", "chapter_delimiter", "suffixes", "case_insensitive"),
        (),
        context,
    )
    kwargs: dict[str, Any] = {}
    if "terminators" in data:
        terms = data["terminators"]
        if (not isinstance(terms, Sequence) or isinstance(terms, str)
                or not terms or not all(isinstance(t, str) and t for t in terms)):
            raise CorpusError(f"{context}: 'terminators' must be a non-empty list of strings")
        kwargs["terminators"] = tuple(terms)
    if "chapter_delimiter" in data:
        pattern = data["chapter_delimiter"]
        if not isinstance(pattern, str):
            raise CorpusError(f"{context}: 'chapter_delimiter' must be a string pattern")
        try:
            re.compile(pattern)
        except re.error as exc:
            raise CorpusError(f"{context}: invalid 'chapter_delimiter' pattern: {exc}") from exc
        kwargs["chapter_delimiter"] = pattern
    if "suffixes" in data:
        suffixes = data["suffixes"]
        if isinstance(suffixes, str) or not isinstance(suffixes, Sequence) or not all(
            isinstance(s, str) and s for s in suffixes
        ):
            raise CorpusError(f"{context}: 'suffixes' must be a list of non-empty strings")
        kwargs["suffixes"] = tuple(suffixes)
    if "case_insensitive" in data:
        kwargs["case_insensitive"] = bool(data["case_insensitive"])
    return TextConfig(**kwargs)


def _read_file(path: Path, context: str) -> str:
    if not path.is_file():
        raise CorpusError(f"{context}: file not found: {path}")
    return path.read_text(encoding="utf-8")


def _load_yaml(path: Path, context: str) -> Any:
    text = _read_file(path, context)
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise CorpusError(f"{context}: malformed YAML in {path}: {exc}") from exc


def load_corpus(manifest_path: str | Path) -> Corpus:
    """Load and validate a manifest plus every referenced story and roster."""
    manifest_path = Path(manifest_path)
    root = manifest_path.parent
    data = _load_yaml(manifest_path, "manifest")
    data = _as_mapping(data, "manifest")
    _check_keys(data, ("writers", "stories", "config"), ("writers", "stories"), "manifest")

    config = _parse_text_config(data["config"]) if "config" in data else TextConfig()

    writers: list[WriterEntry] = []
    writer_ids: set[str] = set()
    raw_writers = data["writers"]
    if not isinstance(raw_writers, Sequence) or isinstance(raw_writers, str):
        raise CorpusError("manifest: 'writers' must be a list")
    for i, raw in enumerate(raw_writers):
        ctx = f"manifest: writer #{i + 1}"
        raw = _as_mapping(raw, ctx)
        _check_keys(raw, ("id", "name", "career"), ("id", "name"), ctx)
        wid = _str_field(raw, "id", ctx)
        if wid in writer_ids:
            raise CorpusError(f"manifest: duplicate writer id {wid!r}")
        writer_ids.add(wid)
        career = None
        if raw.get("career") is not None:
            span = raw["career"]
            if (not isinstance(span, Sequence) or len(span) != 2
                    or not all(isinstance(y, int) for y in span) or span[0] > span[1]):
                raise CorpusError(
                    f"manifest: writer {wid!r}: field 'career' must be [first_year, last_year]"
                )
            career = (span[0], span[1])
        writers.append(WriterEntry(id=wid, name=_str_field(raw, "name", ctx), career=career))

    stories: list[Story] = []
    story_ids: set[str] = set()
    raw_stories = data["stories"]
    if not isinstance(raw_stories, Sequence) or isinstance(raw_stories, str):
        raise CorpusError("manifest: 'stories' must be a list")
    for i, raw in enumerate(raw_stories):
        ctx = f"manifest: story #{i + 1}"
        raw = _as_mapping(raw, ctx)
        _check_keys(
            raw,
            ("id", "title", "writer", "year", "genres", "text", "roster", "segmentation"),
            ("id", "title", "writer", "text", "roster"),
            ctx,
        )
        sid = _str_field(raw, "id", ctx)
        if any(ch.isspace() for ch in sid):
            raise CorpusError(f"{ctx}: field 'id' must not contain whitespace")
        if sid in story_ids:
            raise CorpusError(f"manifest: duplicate story id {sid!r}")
        story_ids.add(sid)
        ctx = f"story {sid!r}"
        wid = _str_field(raw, "writer", ctx)
        if wid not in writer_ids:
            raise CorpusError(f"{ctx}: field 'writer' references unknown writer {wid!r}")
        year = raw.get("year")
        if year is not None and not isinstance(year, int):
            raise CorpusError(f"{ctx}: field 'year' must be an integer")
        writer = next(w for w in writers if w.id == wid)
        if year is not None and writer.career is not None:
            first, last = writer.career
            if not first <= year <= last:
                raise CorpusError(
                    f"{ctx}: field 'year' {year} outside writer {wid!r} career "
                    f"span {first}-{last}"
                )
        genres: set[str] = set()
        for genre in raw.get("genres", []) or []:
            if genre not in GENRES:
                raise CorpusError(
                    f"{ctx}: field 'genres' has unknown value {genre!r}; "
                    f"expected subset of {'/'.join(sorted(GENRES))}"
                )
            genres.add(genre)
        seg_override: dict[str, int] = {}
        if raw.get("segmentation") is not None:
            seg = _as_mapping(raw["segmentation"], f"{ctx}: segmentation")
            _check_keys(seg, ("delta_a", "delta_b", "delta_c"), (), f"{ctx}: segmentation")
            for key, value in seg.items():
                if not isinstance(value, int) or value < 0:
                    raise CorpusError(
                        f"{ctx}: segmentation override {key!r} must be a non-negative integer"
                    )
                seg_override[key] = value

        text_path = root / _str_field(raw, "text", ctx)
        roster_path = root / _str_field(raw, "roster", ctx)
        entry = StoryEntry(
            id=sid,
            title=_str_field(raw, "title", ctx),
            writer=wid,
            year=year,
            genres=frozenset(genres),
            text_path=text_path,
            roster_path=roster_path,
            seg_override=seg_override,
        )

        roster, co_prot = parse_roster(_load_yaml(roster_path, f"{ctx}: roster"), sid)
        # surfaces shared-alias conflicts at load time
        _alias_forms(roster, config)

        text = _read_file(text_path, f"{ctx}: text")
        chapter_sentences = split_chapters(text, config)
        if not chapter_sentences:
            raise CorpusError(f"{ctx}: text file contains no sentences")
        chapters = tuple(
            Chapter(index=i + 1, sentences=tuple(sents))
            for i, sents in enumerate(chapter_sentences)
        )
        stories.append(Story(entry=entry, roster=roster, chapters=chapters,
                             co_protagonists=co_prot))

    return Corpus(root=root, writers=tuple(writers), stories=tuple(stories), config=config)
