"""Finite words over {1, 2} and collections of forbidden factors.

Words serialize as digit strings; a ``*`` after a digit marks the center,
so ``12*111122`` has its center on the second digit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .errors import InvalidInputError


@dataclass(frozen=True)
class Word:
    digits: tuple[int, ...]
    center: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        for d in self.digits:
            if d not in (1, 2):
                raise InvalidInputError(f"digit {d} not in {{1, 2}}")
        if self.center is not None and not 0 <= self.center < len(self.digits):
            raise InvalidInputError(f"center {self.center} outside word of length {len(self)}")

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip().replace("^", "")
        center = None
        digits = []
        for ch in text:
            if ch == "*":
                if center is not None or not digits:
                    raise InvalidInputError(f"misplaced '*' in {text!r}")
                center = len(digits) - 1
            elif ch in "12":
                digits.append(int(ch))
            else:
                raise InvalidInputError(f"bad character {ch!r} in word {text!r}")
        return cls(tuple(digits), center)

    @property
    def text(self) -> str:
        return "".join(map(str, self.digits))

    def __len__(self):
        return len(self.digits)

    def __str__(self):
        if self.center is None:
            return self.text
        s = self.text
        return s[: self.center + 1] + "*" + s[self.center + 1:]

    @property
    def left(self) -> tuple[int, ...]:
        """Digits left of the center, nearest first."""
        return tuple(reversed(self.digits[: self.center])) if self.center is not None else ()

    @property
    def right(self) -> tuple[int, ...]:
        return self.digits[self.center + 1:] if self.center is not None else ()


WordLike = Union[Word, str, Sequence[int]]


def as_word(w: WordLike) -> Word:
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return Word.parse(w)
    return Word(tuple(w))


def reverse(w: WordLike) -> Word:
    w = as_word(w)
    center = None if w.center is None else len(w) - 1 - w.center
    return Word(tuple(reversed(w.digits)), center)


def contains_factor(w: WordLike, f: WordLike) -> bool:
    """True iff ``f`` occurs contiguously in ``w``."""
    return as_word(f).text in as_word(w).text


@dataclass(frozen=True)
class ForbiddenSet:
    """Ordered, duplicate-free collection of forbidden factors."""

    words: tuple[Word, ...] = ()

    def __post_init__(self):
        seen = set()
        out = []
        for w in self.words:
            w = as_word(w)
            if not len(w):
                raise InvalidInputError("the empty word cannot be forbidden")
            key = (w.digits, w.center)
            if key not in seen:
                seen.add(key)
                out.append(w)
        object.__setattr__(self, "words", tuple(out))

    @classmethod
    def of(cls, words: Iterable[WordLike]) -> "ForbiddenSet":
        return cls(tuple(as_word(w) for w in words))

    @property
    def texts(self) -> frozenset[str]:
        return frozenset(w.text for w in self.words)

    @property
    def reversal_closed(self) -> bool:
        t = self.texts
        return all(x[::-1] in t for x in t)

    @property
    def max_length(self) -> int:
        return max((len(w) for w in self.words), default=0)

    def closure(self) -> "ForbiddenSet":
        out = []
        for w in self.words:
            out.append(w)
            out.append(reverse(w))
        return ForbiddenSet(tuple(out))

    def sorted_texts(self) -> list[str]:
        return sorted(self.texts, key=lambda x: (len(x), x))

    def avoids(self, text: str) -> bool:
        return not any(f in text for f in self.texts)

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


def as_forbidden(fs) -> ForbiddenSet:
    if isinstance(fs, ForbiddenSet):
        return fs
    return ForbiddenSet.of(fs)


def reduce(fs) -> ForbiddenSet:
    """Drop every word that contains another member as a proper factor.

    Only digit strings matter for the reduction; duplicates differing just by
    their center collapse to the first occurrence.
    """
    fs = as_forbidden(fs)
    texts = fs.texts
    keep = []
    seen = set()
    for w in fs.words:
        t = w.text
        if t in seen:
            continue
        if any(o != t and len(o) < len(t) and o in t for o in texts):
            continue
        seen.add(t)
        keep.append(Word(w.digits))
    return ForbiddenSet(tuple(keep))
