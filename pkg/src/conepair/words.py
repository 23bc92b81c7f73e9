"""Words over a generating set, stored as tuples of signed 1-based indices.

A letter ``+i`` is the i-th generator, ``-i`` its formal inverse.  Free
reduction is the universal first normalization pass for every backend.
The text syntax is a product of symbols with integer exponents, e.g.
``a^2*b^-1``, plus commutator brackets ``[u,v]`` = u v u^-1 v^-1 and a
parenthesized subword ``(u)^k``.  ``1`` denotes the empty word.
"""

from __future__ import annotations

from .errors import SpecSyntaxError

Word = tuple  # tuple[int, ...]


def free_reduce(letters) -> Word:
    """Freely reduce a letter sequence (cancel adjacent x x^-1)."""
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert(word: Word) -> Word:
    return tuple(-x for x in reversed(word))


def concat(*words: Word) -> Word:
    letters = []
    for w in words:
        letters.extend(w)
    return free_reduce(letters)


def word_power(word: Word, k: int) -> Word:
    if k < 0:
        return word_power(invert(word), -k)
    return free_reduce(list(word) * k)


def cyclic_reduce(word: Word) -> Word:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def is_reduced(word: Word) -> bool:
    return all(word[i] != -word[i + 1] for i in range(len(word) - 1))


def exponent_vector(word: Word, ngens: int):
    """Abelianized image of the word in Z^ngens."""
    v = [0] * ngens
    for x in word:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


# ---------------------------------------------------------------------------
# text syntax


def format_word(word: Word, symbols) -> str:
    """Render a word in ``a^2*b^-1`` syntax; the empty word renders as ``1``."""
    if not word:
        return "1"
    # run-length collapse consecutive powers of the same generator
    parts = []
    i = 0
    while i < len(word):
        x = word[i]
        j = i
        while j < len(word) and word[j] == x:
            j += 1
        exp = (j - i) * (1 if x > 0 else -1)
        sym = symbols[abs(x) - 1]
        parts.append(sym if exp == 1 else f"{sym}^{exp}")
        i = j
    return "*".join(parts)


class _WordScanner:
    def __init__(self, text, symbol_index, line=None, col_offset=0):
        self.text = text
        self.pos = 0
        self.symbol_index = symbol_index
        self.line = line
        self.col_offset = col_offset

    def error(self, msg):
        raise SpecSyntaxError(msg, line=self.line, column=self.col_offset + self.pos + 1)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self):
        while self.peek() in " \t":
            self.pos += 1

    def scan_int(self):
        start = self.pos
        if self.peek() in "+-":
            self.pos += 1
        if not self.peek().isdigit():
            self.error("expected an integer exponent")
        while self.peek().isdigit():
            self.pos += 1
        return int(self.text[start:self.pos])

    def scan_symbol(self):
        start = self.pos
        if not (self.peek().isalpha() or self.peek() == "_"):
            self.error("expected a generator symbol")
        while self.peek().isalnum() or self.peek() == "_":
            self.pos += 1
        name = self.text[start:self.pos]
        if name not in self.symbol_index:
            self.pos = start
            self.error(f"unknown symbol {name!r}")
        return self.symbol_index[name] + 1

    def scan_atom(self):
        self.skip_ws()
        c = self.peek()
        if c == "1":
            self.pos += 1
            base = ()
        elif c == "(":
            self.pos += 1
            base = self.scan_product()
            self.skip_ws()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
        elif c == "[":
            self.pos += 1
            u = self.scan_product()
            self.skip_ws()
            if self.peek() != ",":
                self.error("expected ',' in commutator")
            self.pos += 1
            v = self.scan_product()
            self.skip_ws()
            if self.peek() != "]":
                self.error("expected ']'")
            self.pos += 1
            base = concat(u, v, invert(u), invert(v))
        else:
            base = (self.scan_symbol(),)
        self.skip_ws()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            exp = self.scan_int()
            return word_power(base, exp)
        return free_reduce(base)

    def scan_product(self):
        word = list(self.scan_atom())
        while True:
            self.skip_ws()
            if self.peek() == "*":
                self.pos += 1
                word.extend(self.scan_atom())
            else:
                break
        return free_reduce(word)


def parse_word(text: str, symbols, line=None, col_offset=0) -> Word:
    """Parse one word; rejects trailing garbage."""
    index = {s: i for i, s in enumerate(symbols)}
    sc = _WordScanner(text, index, line=line, col_offset=col_offset)
    sc.skip_ws()
    if sc.pos == len(text):
        sc.error("empty word")
    word = sc.scan_product()
    sc.skip_ws()
    if sc.pos != len(text):
        sc.error(f"trailing garbage {text[sc.pos:]!r}")
    return word


def split_top_level(text: str):
    """Split on commas that are not inside brackets/parens.

    Yields (fragment, column_offset) pairs; used for comma-separated word
    lists so that commutator commas survive.
    """
    depth = 0
    start = 0
    for i, c in enumerate(text):
        if c in "([":
            depth += 1
        elif c in ")]":
            depth -= 1
        elif c == "," and depth == 0:
            yield text[start:i], start
            start = i + 1
    yield text[start:], start
