"""Rule-based parser for agglutinative words: base lexicon + suffixes with join operators.

Join operators describe what a suffix does to the stem it attaches to:
  +  plain                 stem + form
  -  drop-final-consonant  stem minus its final consonant, + form
  ~  drop-final-e          stem minus its final "e", + form
Analysis runs the operators backwards, peeling suffixes off the right edge.
"""
import logging
from collections import Counter
from itertools import product
from pathlib import Path
from typing import Iterable, Optional, Sequence

from pydantic import ValidationError

from tokenization.models.rules import DEFAULT_CONSONANTS, Analysis, JoinOp, RuleSet, SuffixRule
from tokenization.service.bpe_service import mark_continuations
from utils.errors import GenerationError, ParseError
from utils.textio import read_lines

logger = logging.getLogger(__name__)

UNRESOLVED_GLOSS = "?"
TRUE_VALUES = {"1", "true", "yes", "t", "y"}
FALSE_VALUES = {"0", "false", "no", "f", "n"}


def load_rules(path: Path) -> RuleSet:
    bases: dict[str, str] = {}
    suffixes: list[SuffixRule] = []
    consonants = DEFAULT_CONSONANTS
    max_suffixes = 8

    for line_no, raw in enumerate(read_lines(path), start=1):
        line = raw.rstrip()
        if not line.strip():
            continue
        if line.startswith("#consonants"):
            chars = "".join(line[len("#consonants"):].split())
            if not chars:
                raise ParseError(path, line_no, "#consonants needs at least one character")
            consonants = frozenset(chars)
            continue
        if line.startswith("#max-suffixes"):
            value = line[len("#max-suffixes"):].strip()
            if not value.isdigit() or int(value) < 1:
                raise ParseError(path, line_no, f"#max-suffixes needs a positive integer, got '{value}'")
            max_suffixes = int(value)
            continue
        if line.startswith("#"):
            continue

        fields = line.split("\t")
        kind = fields[0]
        if kind == "base":
            if len(fields) != 3:
                raise ParseError(path, line_no, "expected 'base<TAB>form<TAB>gloss'")
            form, gloss = fields[1], fields[2]
            if not form or any(ch.isspace() for ch in form):
                raise ParseError(path, line_no, "base form is empty or contains whitespace")
            if form in bases:
                raise ParseError(path, line_no, f"duplicate base '{form}'")
            bases[form] = gloss
        elif kind == "suffix":
            if len(fields) != 5:
                raise ParseError(path, line_no, "expected 'suffix<TAB>form<TAB>op<TAB>terminal<TAB>gloss'")
            form, op, terminal, gloss = fields[1:]
            if op not in {j.value for j in JoinOp}:
                raise ParseError(path, line_no, f"unknown join operator '{op}'")
            flag = terminal.strip().lower()
            if flag not in TRUE_VALUES | FALSE_VALUES:
                raise ParseError(path, line_no, f"terminal flag must be a boolean, got '{terminal}'")
            try:
                suffixes.append(SuffixRule(form=form, join=JoinOp(op), gloss=gloss, terminal=flag in TRUE_VALUES))
            except ValidationError as e:
                raise ParseError(path, line_no, e.errors()[0]["msg"])
        else:
            raise ParseError(path, line_no, f"unknown entry type '{kind}'")

    rules = RuleSet(bases=bases, suffixes=tuple(suffixes), max_suffixes=max_suffixes, consonants=consonants)
    logger.info(f"Loaded {len(bases)} bases and {len(suffixes)} suffixes from {path}")
    return rules


def _attach(stem: str, rule: SuffixRule, consonants: frozenset) -> str:
    if rule.join == JoinOp.DROP_FINAL_CONSONANT:
        if not stem or stem[-1] not in consonants:
            raise GenerationError(rule.name, f"stem '{stem}' does not end in a consonant")
        return stem[:-1] + rule.form
    if rule.join == JoinOp.DROP_FINAL_E:
        if not stem.endswith("e"):
            raise GenerationError(rule.name, f"stem '{stem}' does not end in 'e'")
        return stem[:-1] + rule.form
    return stem + rule.form


def generate(base: str, rules: Sequence[SuffixRule], consonants: frozenset = DEFAULT_CONSONANTS) -> str:
    """Attach suffixes left to right."""
    stem = base
    for rule in rules:
        stem = _attach(stem, rule, consonants)
    return stem


def surface_contributions(base: str, rules: Sequence[SuffixRule]) -> list[str]:
    """What each morpheme contributes to the surface word; deletions shorten the nearest earlier piece."""
    pieces = [base]
    for rule in rules:
        if rule.join.deletes:
            for i in range(len(pieces) - 1, -1, -1):
                if pieces[i]:
                    pieces[i] = pieces[i][:-1]
                    break
        pieces.append(rule.form)
    return pieces


def _unresolved(word: str) -> Analysis:
    return Analysis(morphemes=((word, UNRESOLVED_GLOSS),), resolved=False)


def analyze(word: str, rules: RuleSet) -> list[Analysis]:
    """Every base + suffix derivation that generates `word`, best first; an unresolved passthrough if none."""
    found: dict[tuple, Analysis] = {}
    consonants = sorted(rules.consonants)

    def record(base: str, peeled: tuple) -> None:
        key = (base, peeled)
        if key in found:
            return
        try:
            if generate(base, peeled, rules.consonants) != word:
                return
        except GenerationError:
            return
        surfaces = surface_contributions(base, peeled)
        glosses = [rules.bases[base]] + [rule.gloss for rule in peeled]
        found[key] = Analysis(morphemes=tuple(zip(surfaces, glosses)), resolved=True, base=base, rules=peeled)

    def search(surface: str, peeled: tuple) -> None:
        if surface in rules.bases:
            record(surface, peeled)
        if len(peeled) >= rules.max_suffixes:
            return
        for rule in rules.suffixes:
            if not peeled and not rule.terminal:
                continue
            if not surface.endswith(rule.form):
                continue
            rest = surface[:-len(rule.form)]
            if rule.join == JoinOp.PLAIN:
                if rest:
                    search(rest, (rule,) + peeled)
            elif rule.join == JoinOp.DROP_FINAL_CONSONANT:
                for consonant in consonants:
                    search(rest + consonant, (rule,) + peeled)
            else:
                search(rest + "e", (rule,) + peeled)

    search(word, ())
    if not found:
        return [_unresolved(word)]
    return sorted(found.values(), key=lambda a: (len(a.morphemes), a.glosses, tuple(a.surfaces)))


def best_analysis(word: str, rules: RuleSet) -> Analysis:
    return analyze(word, rules)[0]


def analysis_tokens(analysis: Analysis, emit_glosses: bool = False) -> list[str]:
    pieces = [(surface, gloss) for surface, gloss in analysis.morphemes if surface]
    tokens = [f"{surface}|{gloss}" if emit_glosses else surface for surface, gloss in pieces]
    return mark_continuations(tokens)


def tokenize_corpus(lines: Iterable[Sequence[str]], rules: RuleSet, emit_glosses: bool = False) -> list[list[str]]:
    """Replace each word by the morphemes of its best analysis; unresolved words pass through."""
    cache: dict[str, Analysis] = {}
    coverage: Counter = Counter()
    out = []
    for tokens in lines:
        parsed: list[str] = []
        for token in tokens:
            if token not in cache:
                cache[token] = best_analysis(token, rules)
            analysis = cache[token]
            coverage["resolved" if analysis.resolved else "unresolved"] += 1
            parsed.extend(analysis_tokens(analysis, emit_glosses))
        out.append(parsed)

    total = sum(coverage.values())
    if total:
        resolved_types = sum(1 for a in cache.values() if a.resolved)
        logger.info(f"Rule parser resolved {coverage['resolved']}/{total} tokens, {resolved_types}/{len(cache)} types")
    return out


def enumerate_derivations(rules: RuleSet, depth: Optional[int] = None) -> list[tuple[str, tuple, str]]:
    """All (base, suffixes, surface) derivations with up to `depth` suffixes, last suffix terminal."""
    depth = rules.max_suffixes if depth is None else depth
    derivations = []
    for base in sorted(rules.bases):
        derivations.append((base, (), base))
        for length in range(1, depth + 1):
            for sequence in product(rules.suffixes, repeat=length):
                if not sequence[-1].terminal:
                    continue
                try:
                    surface = generate(base, sequence, rules.consonants)
                except GenerationError:
                    continue
                derivations.append((base, sequence, surface))
    return derivations
