# Standard Library
from collections import Counter
from functools import lru_cache
from typing import Hashable

# My Library
from utils.dsl import TheoryPresentation
from utils.term import Term, Var, App, term_key
from ..base import EqualityOracle, right_nested


@lru_cache(maxsize=1 << 14)
def band_key(word: tuple[str, ...]) -> tuple:
    """
    canonical value of a word in the free band (idempotent semigroup)

    Two words are equal in the free band iff they have the same content, the same longest prefix missing one
    letter of the content (recursively), the same letter ending that prefix, and dually for suffixes.
    """
    if not word:
        return ()
    content = set(word)
    k = len(content)

    def cut(letters: tuple[str, ...]) -> int:
        seen: set[str] = set()
        for i, letter in enumerate(letters):
            if letter not in seen:
                if len(seen) == k - 1:
                    return i
                seen.add(letter)
        raise AssertionError("content exhausted before the cut")

    i = cut(word)
    j = len(word) - 1 - cut(tuple(reversed(word)))
    return (tuple(sorted(content)), band_key(word[:i]), word[i], word[j], band_key(word[j + 1:]))


@lru_cache(maxsize=1 << 14)
def band_word(key: tuple) -> tuple[str, ...]:
    if not key:
        return ()
    _, prefix, first, last, suffix = key
    middle = (first,) if first == last else (first, last)
    return band_word(prefix) + middle + band_word(suffix)


class BoomOracle(EqualityOracle):
    """
    one binary operation with any combination of unit (U), associativity (A), commutativity (C) and idempotence (I)

    Associative variants flatten to words, multisets, sets or free-band words; the others keep binary trees,
    absorbing the unit, sorting the children and collapsing equal children bottom-up.
    """

    def __init__(self, presentation: TheoryPresentation, boom_id: str) -> None:
        super().__init__(presentation)
        self.backend = boom_id
        self.unital = "U" in boom_id
        self.associative = "A" in boom_id
        self.commutative = "C" in boom_id
        self.idempotent = "I" in boom_id
        self.bind({2: 1, 0: 1 if self.unital else 0})
        self.op = self.symbol(self.names_of_arity(2)[0])
        self.unit = App(self.symbol(self.names_of_arity(0)[0])) if self.unital else None

    def leaves(self, t: Term, out: list[str]) -> list[str]:
        if isinstance(t, Var):
            out.append(t.name)
        elif t == self.unit:
            pass
        elif t.symbol == self.op:
            self.leaves(t.args[0], out)
            self.leaves(t.args[1], out)
        else:
            raise self.unexpected(t)
        return out

    def tree(self, t: Term) -> Term:
        if isinstance(t, Var) or t == self.unit:
            return t
        if t.symbol != self.op:
            raise self.unexpected(t)
        left, right = self.tree(t.args[0]), self.tree(t.args[1])
        if self.unital:
            if left == self.unit:
                return right
            if right == self.unit:
                return left
        if self.commutative and term_key(right) < term_key(left):
            left, right = right, left
        if self.idempotent and left == right:
            return left
        return App(self.op, (left, right))

    def canonical(self, t: Term) -> Hashable:
        if not self.associative:
            return self.tree(t)
        word = tuple(self.leaves(t, []))
        if self.commutative and self.idempotent:
            return ("set", tuple(sorted(set(word))))
        if self.commutative:
            return ("multiset", tuple(sorted(Counter(word).items())))
        if self.idempotent:
            return ("band", band_key(word))
        return ("word", word)

    def reify(self, value: Hashable) -> Term:
        if not self.associative:
            return value
        kind, body = value
        if kind == "set":
            word = list(body)
        elif kind == "multiset":
            word = [name for name, count in body for _ in range(count)]
        elif kind == "band":
            word = list(band_word(body))
        else:
            word = list(body)
        return right_nested(self.op, [Var(name) for name in word], self.unit)

    def word(self, t: Term) -> tuple[str, ...]:
        """generators of the normal form in order, with multiplicity"""
        return tuple(self.leaves(self.normalize(t), []))
