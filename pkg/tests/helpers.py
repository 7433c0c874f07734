"""Shared test utilities: brute-force braid oracles and small generators."""

from __future__ import annotations

from collections import deque

from braidfloer.words import BraidWord, word


def _neighbors(letters: tuple[int, ...]):
    """Words one rewrite away: far commutation and the braid relation."""
    for p in range(len(letters) - 1):
        a, b = letters[p], letters[p + 1]
        if abs(a - b) >= 2:
            yield letters[:p] + (b, a) + letters[p + 2:]
    for p in range(len(letters) - 2):
        a, b, c = letters[p:p + 3]
        if a == c and abs(a - b) == 1:
            yield letters[:p] + (b, a, b) + letters[p + 3:]


def positive_words_equal(w1: BraidWord, w2: BraidWord, cap: int = 200000) -> bool:
    """Decide equality of two positive words by exhaustive rewriting."""
    assert w1.is_positive() and w2.is_positive()
    if w1.strands != w2.strands or len(w1) != len(w2):
        return False
    start = tuple(i for i, _ in w1.letters)
    goal = tuple(i for i, _ in w2.letters)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            return True
        for nxt in _neighbors(cur):
            if nxt not in seen:
                if len(seen) >= cap:
                    raise RuntimeError("oracle state cap exceeded")
                seen.add(nxt)
                queue.append(nxt)
    return False


def signed_words_equal(w1: BraidWord, w2: BraidWord, max_len: int = 14, cap: int = 400000) -> bool:
    """Decide equality of signed words by bounded rewriting with free moves.

    Searches w1 * w2^{-1} for the empty word using free reduction, free
    insertion (bounded), commutation and braid relations.
    """
    if w1.strands != w2.strands:
        return False
    n = w1.strands
    target = tuple(i * s for i, s in w1.letters) + tuple(-i * -s * -1 for i, s in reversed(w2.letters))
    # w2^{-1}: reversed letters with flipped signs
    target = tuple(i * s for i, s in w1.letters) + tuple(i * -s for i, s in reversed(w2.letters))

    def reduce_free(ls):
        stack = []
        for v in ls:
            if stack and stack[-1] == -v:
                stack.pop()
            else:
                stack.append(v)
        return tuple(stack)

    def moves(ls):
        for p in range(len(ls) - 1):
            a, b = ls[p], ls[p + 1]
            if abs(abs(a) - abs(b)) >= 2:
                yield ls[:p] + (b, a) + ls[p + 2:]
        for p in range(len(ls) - 2):
            a, b, c = ls[p:p + 3]
            if a > 0 and b > 0 and c > 0 and a == c and abs(a - b) == 1:
                yield ls[:p] + (b, a, b) + ls[p + 3:]
            if a < 0 and b < 0 and c < 0 and a == c and abs(a - b) == 1:
                yield ls[:p] + (b, a, b) + ls[p + 3:]
        if len(ls) + 2 <= max_len:
            for p in range(len(ls) + 1):
                for i in range(1, n):
                    yield ls[:p] + (i, -i) + ls[p:]
                    yield ls[:p] + (-i, i) + ls[p:]

    start = reduce_free(target)
    if not start:
        return True
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for raw in moves(cur):
            nxt = reduce_free(raw)
            if not nxt:
                return True
            if len(nxt) <= max_len and nxt not in seen:
                if len(seen) >= cap:
                    raise RuntimeError("oracle state cap exceeded")
                seen.add(nxt)
                queue.append(nxt)
    return False


def random_word(rng, strands: int, length: int) -> BraidWord:
    return word(
        strands,
        [rng.randrange(1, strands) * rng.choice((1, -1)) for _ in range(length)],
    )
