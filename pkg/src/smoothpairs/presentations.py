"""Free-group words, finite presentations and their text grammar.

Words are kept freely reduced in run-length form: a tuple of
``(generator index, nonzero exponent)`` syllables with no two adjacent
syllables on the same generator.  Commutators follow ``[u, v] = u^-1 v^-1 u v``.

Grammar accepted by :func:`parse_word`::

    word  := term (('*')? term)*
    term  := atom ('^' INT)?
    atom  := NAME | '1' | '(' word ')' | '[' word ',' word ']'
    INT   := ('+'|'-')? DIGITS

Whitespace is insignificant between tokens.  Names are maximal runs matching
``[A-Za-z][A-Za-z0-9_]*``, so ``xy`` is one name, not ``x y``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class PresentationError(ValueError):
    pass


class UnknownGenerator(PresentationError):
    pass


class ZeroExponent(PresentationError):
    pass


class TableMismatch(PresentationError):
    pass


class ParseError(PresentationError):
    def __init__(self, msg: str, offset: int):
        super().__init__(f"{msg} at byte {offset}")
        self.offset = offset


def _push(stack: list, g: int, e: int) -> None:
    if e == 0:
        return
    if stack and stack[-1][0] == g:
        e += stack[-1][1]
        stack.pop()
        if e != 0:
            stack.append((g, e))
    else:
        stack.append((g, e))


@dataclass(frozen=True)
class Word:
    syllables: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_syllables(cls, pairs: Iterable[tuple[int, int]]) -> "Word":
        stack: list[tuple[int, int]] = []
        for g, e in pairs:
            _push(stack, g, e)
        return cls(tuple(stack))

    @classmethod
    def gen(cls, i: int, e: int = 1) -> "Word":
        return cls(((i, e),)) if e else cls()

    @classmethod
    def commutator(cls, u: "Word", v: "Word") -> "Word":
        return (~u) * (~v) * u * v

    def __mul__(self, other: "Word") -> "Word":
        stack = list(self.syllables)
        for g, e in other.syllables:
            _push(stack, g, e)
        return Word(tuple(stack))

    def __invert__(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return (~self) ** (-k)
        if len(self.syllables) == 1:
            g, e = self.syllables[0]
            return Word.gen(g, e * k)
        result, base = Word(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def is_identity(self) -> bool:
        return not self.syllables

    def letters(self) -> Iterator[tuple[int, int]]:
        """Letter-by-letter expansion as (generator, +1 or -1)."""
        for g, e in self.syllables:
            s = 1 if e > 0 else -1
            for _ in range(abs(e)):
                yield g, s

    def support(self) -> set[int]:
        return {g for g, _ in self.syllables}

    def max_generator(self) -> int:
        return max((g for g, _ in self.syllables), default=-1)

    def exponent_vector(self, d: int) -> list[int]:
        if self.max_generator() >= d:
            raise TableMismatch(f"word uses generator {self.max_generator()} of a {d}-generator table")
        vec = [0] * d
        for g, e in self.syllables:
            vec[g] += e
        return vec

    def substitute(self, images: Sequence["Word"]) -> "Word":
        if self.max_generator() >= len(images):
            raise TableMismatch("image table does not cover every generator")
        out = Word()
        for g, e in self.syllables:
            out = out * (images[g] ** e)
        return out

    def cyclic_reduce(self) -> "Word":
        syl = list(self.syllables)
        while len(syl) >= 2 and syl[0][0] == syl[-1][0]:
            g, e = syl[0][0], syl[0][1] + syl[-1][1]
            syl = syl[1:-1]
            if e:
                syl = [(g, e)] + syl
        return Word(tuple(syl))

    def reindex(self, mapping: Mapping[int, int]) -> "Word":
        return Word.from_syllables((mapping[g], e) for g, e in self.syllables)


def commutator(u: Word, v: Word) -> Word:
    return Word.commutator(u, v)


def multiply(u: Word, v: Word) -> Word:
    return u * v


def invert(u: Word) -> Word:
    return ~u


def exponent_vector(u: Word, d: int) -> list[int]:
    return u.exponent_vector(d)


def substitute(u: Word, images: Sequence[Word]) -> Word:
    return u.substitute(images)


class GeneratorTable:
    """Ordered, uniquely named generators."""

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        for nm in self.names:
            if not isinstance(nm, str) or not NAME_RE.fullmatch(nm):
                raise PresentationError(f"bad generator name {nm!r}")
        if len(set(self.names)) != len(self.names):
            raise PresentationError("generator names must be unique")
        self._index = {nm: i for i, nm in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other):
        return isinstance(other, GeneratorTable) and other.names == self.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"GeneratorTable({list(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGenerator(name) from None

    def __getitem__(self, i: int) -> str:
        return self.names[i]


class _Parser:
    def __init__(self, text: str, table: GeneratorTable):
        self.text = text
        self.table = table
        self.i = 0

    def offset(self, i: int | None = None) -> int:
        return len(self.text[: self.i if i is None else i].encode("utf-8"))

    def fail(self, msg: str, i: int | None = None):
        raise ParseError(msg, self.offset(i))

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def word(self) -> Word:
        out = Word()
        seen = False
        while True:
            c = self.peek()
            if c == "*":
                if not seen:
                    self.fail("'*' without left operand")
                self.i += 1
                c = self.peek()
                if not c or c in ")],*^":
                    self.fail("'*' without right operand")
            if not c or c in ")],":
                break
            out = out * self.term()
            seen = True
        if not seen:
            self.fail("empty word")
        return out

    def integer(self) -> int:
        self.skip()
        m = re.compile(r"[+-]?\s*\d+").match(self.text, self.i)
        if not m:
            self.fail("expected integer exponent")
        self.i = m.end()
        return int(m.group().replace(" ", ""))

    def term(self) -> Word:
        base = self.atom()
        while self.peek() == "^":
            self.i += 1
            at = self.i
            k = self.integer()
            if k == 0:
                raise ZeroExponent(f"zero exponent at byte {self.offset(at)}")
            base = base ** k
        return base

    def atom(self) -> Word:
        c = self.peek()
        if c == "(":
            self.i += 1
            w = self.word()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.i += 1
            return w
        if c == "[":
            self.i += 1
            u = self.word()
            if self.peek() != ",":
                self.fail("expected ','")
            self.i += 1
            v = self.word()
            if self.peek() != "]":
                self.fail("expected ']'")
            self.i += 1
            return commutator(u, v)
        if c == "1":
            self.i += 1
            return Word()
        m = NAME_RE.match(self.text, self.i)
        if not m:
            self.fail(f"unexpected character {c!r}" if c else "unexpected end of input")
        self.i = m.end()
        try:
            return Word.gen(self.table.index(m.group()))
        except UnknownGenerator:
            raise UnknownGenerator(f"{m.group()!r} at byte {self.offset(m.start())}") from None


def parse_word(text: str, table: GeneratorTable | Sequence[str]) -> Word:
    if not isinstance(table, GeneratorTable):
        table = GeneratorTable(table)
    parser = _Parser(text, table)
    if not parser.peek():
        parser.fail("empty word")
    w = parser.word()
    if parser.peek():
        parser.fail(f"unexpected {parser.peek()!r}")
    return w


def format_word(w: Word, table: GeneratorTable | Sequence[str]) -> str:
    names = table.names if isinstance(table, GeneratorTable) else tuple(table)
    if w.is_identity():
        return "1"
    return " ".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in w.syllables)


@dataclass(frozen=True)
class Presentation:
    """A finite pro-p presentation <X | R> over a fixed prime p."""

    p: int
    generators: GeneratorTable
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        from .padics import is_prime

        if not is_prime(self.p):
            raise PresentationError(f"p must be prime, got {self.p}")
        if not isinstance(self.generators, GeneratorTable):
            object.__setattr__(self, "generators", GeneratorTable(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        d = len(self.generators)
        for r in self.relators:
            if r.max_generator() >= d:
                raise TableMismatch("relator uses an undeclared generator")

    @classmethod
    def parse(cls, p: int, generators: Sequence[str], relators: Sequence[str]) -> "Presentation":
        table = GeneratorTable(generators)
        return cls(p, table, tuple(parse_word(r, table) for r in relators))

    @property
    def d(self) -> int:
        return len(self.generators)

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def format(self, w: Word) -> str:
        return format_word(w, self.generators)

    def relator_strings(self) -> list[str]:
        return [self.format(r) for r in self.relators]

    def with_relators(self, extra: Iterable[Word]) -> "Presentation":
        return Presentation(self.p, self.generators, self.relators + tuple(extra))

    def is_minimal(self) -> bool:
        """Relators lie in the Frattini subgroup of the free pro-p group."""
        return all(all(e % self.p == 0 for e in r.exponent_vector(self.d)) for r in self.relators)

    def __str__(self):
        gens = ", ".join(self.generators)
        rels = ", ".join(self.relator_strings())
        return f"<{gens} | {rels}>"


def _canonical_cyclic(w: Word) -> tuple:
    """Key identifying w up to cyclic rotation and inversion."""
    keys = []
    for v in (w, ~w):
        syl = v.syllables
        keys.extend(syl[i:] + syl[:i] for i in range(len(syl)))
    return min(keys) if keys else ()


def simplify(pres: Presentation) -> tuple[Presentation, list[Word], list[int]]:
    """Deterministic Tietze cleanup.

    Removes relators that are trivial or repeated (up to rotation and
    inversion) and eliminates a generator g whenever some relator, cyclically
    reduced, contains g in exactly one syllable with exponent +-1.  Shortest
    relators are used first, ties broken by relator then generator index.

    Returns the new presentation, the image of every original generator as a
    word in the new generators, and the original indices of the survivors.
    """
    d = pres.d
    rels = [r for r in pres.relators]
    alive = list(range(d))
    # images in terms of *original* indices until the end
    images = [Word.gen(i) for i in range(d)]
    while True:
        rels = [r.cyclic_reduce() for r in rels]
        seen, kept = set(), []
        for r in rels:
            if r.is_identity():
                continue
            key = _canonical_cyclic(r)
            if key in seen:
                continue
            seen.add(key)
            kept.append(r)
        rels = kept
        choice = None
        for ri in sorted(range(len(rels)), key=lambda k: (len(rels[k]), k)):
            r = rels[ri]
            counts: dict[int, int] = {}
            for g, _ in r.syllables:
                counts[g] = counts.get(g, 0) + 1
            cands = [(g, pos) for pos, (g, e) in enumerate(r.syllables) if abs(e) == 1 and counts[g] == 1]
            if cands:
                g, pos = min(cands)
                choice = (ri, g, pos)
                break
        if choice is None:
            break
        ri, g, pos = choice
        r = rels[ri]
        syl = r.syllables
        rot = syl[pos:] + syl[:pos]
        e = rot[0][1]
        rest = Word(rot[1:])
        # g^e * rest = 1  =>  g = rest^-1 (e = 1) or g = rest (e = -1)
        value = ~rest if e == 1 else rest
        sub = [Word.gen(i) for i in range(d)]
        sub[g] = value
        rels = [w.substitute(sub) for k, w in enumerate(rels) if k != ri]
        images = [w.substitute(sub) for w in images]
        alive.remove(g)
    mapping = {old: new for new, old in enumerate(alive)}
    names = [pres.generators[i] for i in alive]
    new = Presentation(pres.p, GeneratorTable(names), tuple(r.reindex(mapping) for r in rels))
    return new, [w.reindex(mapping) for w in images], alive
