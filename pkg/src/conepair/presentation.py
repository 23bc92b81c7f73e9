"""Group, subgroup and pair specifications, their file format, and word
normalization through pluggable word-problem backends.

Spec file grammar (INI-like; ``#`` starts a comment; keys may appear once
per section):

    [group]
    name = Z2               # optional
    generators = a, b
    relators = [a,b]        # comma-separated words; may be empty
    backend = free_abelian  # free | free_abelian | finite_table | generic_fp

    [subgroup]              # repeatable; order defines the collection
    name = P1
    generators = a^2

Words are products of symbols with integer exponents (``a^2*b^-1``),
commutators ``[u,v]``, and parenthesized subwords.  The parser rejects
trailing garbage, unknown keys and unknown symbols with line/column
positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SpecSyntaxError, ValidationError
from .words import (
    Word,
    format_word,
    free_reduce,
    is_reduced,
    parse_word,
    split_top_level,
)

BACKENDS = ("free", "free_abelian", "finite_table", "generic_fp")


@dataclass(frozen=True)
class GroupSpec:
    """A finite presentation with a backend hint for the word problem."""

    generators: tuple
    relators: tuple
    backend_hint: str
    name: str = ""

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValidationError("generator symbols must be distinct")
        if not self.generators:
            raise ValidationError("at least one generator is required")
        if self.backend_hint not in BACKENDS:
            raise ValidationError(
                f"unsupported backend hint {self.backend_hint!r}; expected one of {BACKENDS}")
        n = len(self.generators)
        for rel in self.relators:
            if not rel:
                raise ValidationError("relators must be nonempty")
            if not is_reduced(rel):
                raise ValidationError(f"relator {rel} is not freely reduced")
            if any(not (1 <= abs(x) <= n) for x in rel):
                raise ValidationError(f"relator {rel} uses an undeclared symbol")
        if self.backend_hint == "free" and self.relators:
            raise ValidationError("free backend admits no relators")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def format(self, word: Word) -> str:
        return format_word(word, self.generators)


@dataclass(frozen=True)
class SubgroupSpec:
    """A subgroup given by generating words in the ambient group.

    ``multiplicity_index`` distinguishes repeated entries of the same
    subgroup body within a collection; entries that differ only in it are
    distinct members of the pair.
    """

    name: str
    generator_words: tuple
    multiplicity_index: int = 0

    def __post_init__(self):
        if not self.generator_words:
            raise ValidationError(f"subgroup {self.name!r} has no generator words")


@dataclass(frozen=True)
class GroupPairSpec:
    """A group together with a finite ordered collection of subgroups."""

    group: GroupSpec
    collection: tuple

    def __post_init__(self):
        if not self.collection:
            raise ValidationError("the subgroup collection must be nonempty")
        for sub in self.collection:
            for w in sub.generator_words:
                if any(not (1 <= abs(x) <= self.group.ngens) for x in w):
                    raise ValidationError(
                        f"subgroup {sub.name!r} word {w} uses an undeclared symbol")


@dataclass(frozen=True)
class RelativePresentation:
    """A presentation over the free product of F(S) with the collection.

    Relators are stored in normal free-product form: alternating syllables
    ``("s", word-in-S)`` / ``("p", collection_index, word-in-ambient)``,
    with no trivial syllable and no two adjacent syllables of the same
    factor.
    """

    relative_generators: tuple
    collection: tuple
    relators: tuple = field(default=())

    def __post_init__(self):
        for rel in self.relators:
            if not rel:
                raise ValidationError("relative relators must be nonempty")
            prev_factor = None
            for syl in rel:
                if syl[0] == "s":
                    factor = "s"
                    if not syl[1]:
                        raise ValidationError("trivial S-syllable in relative relator")
                elif syl[0] == "p":
                    factor = ("p", syl[1])
                    if not (0 <= syl[1] < len(self.collection)):
                        raise ValidationError("syllable names an unknown collection entry")
                    if not syl[2]:
                        raise ValidationError("trivial parabolic syllable in relative relator")
                else:
                    raise ValidationError(f"unknown syllable tag {syl[0]!r}")
                if factor == prev_factor:
                    raise ValidationError("adjacent syllables lie in the same factor")
                prev_factor = factor


# ---------------------------------------------------------------------------
# file format


def _parse_sections(text: str):
    """Split an INI-like document into (section_name, line, {key: (value, line)})."""
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise SpecSyntaxError("unterminated section header", line=lineno)
            name = stripped[1:-1].strip()
            current = (name, lineno, {})
            sections.append(current)
            continue
        if current is None:
            raise SpecSyntaxError(f"content outside any section: {stripped!r}", line=lineno)
        if "=" not in line:
            raise SpecSyntaxError(f"expected 'key = value', got {stripped!r}", line=lineno)
        key, value = line.split("=", 1)
        key = key.strip()
        if key in current[2]:
            raise SpecSyntaxError(f"duplicate key {key!r}", line=lineno)
        current[2][key] = (value.strip(), lineno)
    return sections


def _parse_word_list(value: str, symbols, line):
    words = []
    for frag, off in split_top_level(value):
        if not frag.strip():
            if value.strip():
                raise SpecSyntaxError("empty entry in word list", line=line, column=off + 1)
            continue
        words.append(parse_word(frag.strip(), symbols, line=line))
    return tuple(words)


_GROUP_KEYS = {"name", "generators", "relators", "backend"}
_SUBGROUP_KEYS = {"name", "generators"}


def _group_from_section(fields, lineno):
    for key in fields:
        if key not in _GROUP_KEYS:
            raise SpecSyntaxError(f"unknown key {key!r} in [group]", line=fields[key][1])
    for key in ("generators", "backend"):
        if key not in fields:
            raise SpecSyntaxError(f"[group] is missing {key!r}", line=lineno)
    gens_value, gens_line = fields["generators"]
    generators = tuple(s.strip() for s in gens_value.split(","))
    if any(not g for g in generators):
        raise SpecSyntaxError("empty generator symbol", line=gens_line)
    for g in generators:
        if not (g[0].isalpha() or g[0] == "_") or not all(c.isalnum() or c == "_" for c in g):
            raise SpecSyntaxError(f"bad generator symbol {g!r}", line=gens_line)
    relators = ()
    if "relators" in fields:
        rel_value, rel_line = fields["relators"]
        relators = _parse_word_list(rel_value, generators, rel_line)
    backend, backend_line = fields["backend"]
    if backend not in BACKENDS:
        raise SpecSyntaxError(
            f"unsupported backend hint {backend!r}; expected one of {BACKENDS}",
            line=backend_line)
    name = fields.get("name", ("", lineno))[0]
    try:
        return GroupSpec(generators=generators, relators=relators,
                         backend_hint=backend, name=name)
    except ValidationError as exc:
        raise SpecSyntaxError(str(exc), line=lineno) from exc


def parse_group_spec(text: str) -> GroupSpec:
    """Parse a document containing a single [group] section."""
    sections = _parse_sections(text)
    groups = [s for s in sections if s[0] == "group"]
    if len(groups) != 1:
        raise SpecSyntaxError("expected exactly one [group] section")
    for name, lineno, _ in sections:
        if name not in ("group", "subgroup"):
            raise SpecSyntaxError(f"unknown section [{name}]", line=lineno)
    return _group_from_section(groups[0][2], groups[0][1])


def parse_pair_spec(text: str) -> GroupPairSpec:
    """Parse a [group] section followed by one or more [subgroup] sections.

    Collection order is the file order; repeated subgroup bodies receive
    distinct multiplicity indices.
    """
    sections = _parse_sections(text)
    group = parse_group_spec(text)
    collection = []
    body_counts = {}
    for name, lineno, fields in sections:
        if name != "subgroup":
            continue
        for key in fields:
            if key not in _SUBGROUP_KEYS:
                raise SpecSyntaxError(f"unknown key {key!r} in [subgroup]", line=fields[key][1])
        if "generators" not in fields:
            raise SpecSyntaxError("[subgroup] is missing 'generators'", line=lineno)
        gen_value, gen_line = fields["generators"]
        wordlist = _parse_word_list(gen_value, group.generators, gen_line)
        if not wordlist:
            raise SpecSyntaxError("subgroup needs at least one generator word", line=gen_line)
        body = tuple(free_reduce(w) for w in wordlist)
        mult = body_counts.get(body, 0)
        body_counts[body] = mult + 1
        sub_name = fields.get("name", (f"P{len(collection) + 1}", lineno))[0]
        collection.append(SubgroupSpec(name=sub_name, generator_words=body,
                                       multiplicity_index=mult))
    if not collection:
        raise SpecSyntaxError("pair spec needs at least one [subgroup] section")
    return GroupPairSpec(group=group, collection=tuple(collection))


def serialize_pair_spec(pair: GroupPairSpec) -> str:
    """Canonical text form; parse(serialize(parse(x))) == parse(x)."""
    g = pair.group
    lines = ["[group]"]
    if g.name:
        lines.append(f"name = {g.name}")
    lines.append("generators = " + ", ".join(g.generators))
    lines.append("relators = " + ", ".join(g.format(r) for r in g.relators))
    lines.append(f"backend = {g.backend_hint}")
    for sub in pair.collection:
        lines.append("")
        lines.append("[subgroup]")
        lines.append(f"name = {sub.name}")
        lines.append("generators = " + ", ".join(g.format(w) for w in sub.generator_words))
    return "\n".join(lines) + "\n"


def serialize_group_spec(spec: GroupSpec) -> str:
    lines = ["[group]"]
    if spec.name:
        lines.append(f"name = {spec.name}")
    lines.append("generators = " + ", ".join(spec.generators))
    lines.append("relators = " + ", ".join(spec.format(r) for r in spec.relators))
    lines.append(f"backend = {spec.backend_hint}")
    return "\n".join(lines) + "\n"


def normalize_word(spec: GroupSpec, word) -> "NormalizedWord":
    """Normalize a word through the spec's backend.

    free: freely reduced word; free_abelian: canonical sorted exponent
    form; finite_table: shortlex representative of the table element;
    generic_fp: freely reduced only, flagged non-canonical.
    """
    from .backends import backend_for  # deferred: backends need linear algebra

    word = free_reduce(word)
    n = spec.ngens
    if any(not (1 <= abs(x) <= n) for x in word):
        raise ValidationError("word uses an undeclared symbol")
    backend = backend_for(spec)
    return backend.normalize(word)


@dataclass(frozen=True)
class NormalizedWord:
    word: Word
    canonical: bool
    element_id: int | None = None  # finite_table only
