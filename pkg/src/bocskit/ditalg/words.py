"""Formal sums of words in the generators of a layer.

A word is a tuple of letters read like a composition: the rightmost letter
acts first.  Letters are

    ("w", label)          a degree-0 generator
    ("u", label)          a degree-1 generator
    ("c", vertex, elem)   a scalar of the field at ``vertex``
    ("e", vertex)         the identity at ``vertex``

and a formal sum is a dict mapping words to coefficients in F_p.
"""

from __future__ import annotations

from typing import Callable, Iterable

Word = tuple
Sum = dict


def is_w(letter) -> bool:
    return letter[0] == "w"


def is_u(letter) -> bool:
    return letter[0] == "u"


def degree(word: Word) -> int:
    return sum(1 for l in word if l[0] == "u")


def add_into(acc: Sum, word: Word, coef: int, p: int) -> None:
    c = (acc.get(word, 0) + coef) % p
    if c:
        acc[word] = c
    else:
        acc.pop(word, None)


def add(a: Sum, b: Sum, p: int, scale: int = 1) -> Sum:
    out = dict(a)
    for w, c in b.items():
        add_into(out, w, c * scale, p)
    return out


def concat(a: Sum, b: Sum, p: int) -> Sum:
    """Product a*b (b acts first)."""
    out: Sum = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            add_into(out, wa + wb, ca * cb, p)
    return out


def scale(a: Sum, k: int, p: int) -> Sum:
    return {w: (c * k) % p for w, c in a.items() if (c * k) % p}


def letters(s: Sum) -> set:
    return {l for w in s for l in w}


def substitute(s: Sum, rule: Callable[[tuple], Sum | None], p: int) -> Sum:
    """Replace each letter by a formal sum (None keeps the letter)."""
    out: Sum = {}
    for w, c in s.items():
        partial: Sum = {(): c}
        for l in w:
            r = rule(l)
            partial = concat(partial, {(l,): 1} if r is None else r, p)
            if not partial:
                break
        out = add(out, partial, p)
    return out


def format_word(word: Word) -> str:
    parts = []
    for l in word:
        if l[0] in ("w", "u"):
            parts.append(str(l[1]))
        elif l[0] == "c":
            parts.append(f"[{l[2]}@{l[1]}]")
        else:
            parts.append(f"1@{l[1]}")
    return "*".join(parts) if parts else "1"


def format_sum(s: Sum) -> str:
    if not s:
        return "0"
    return " + ".join(f"{c}*{format_word(w)}" if c != 1 else format_word(w) for w, c in sorted(s.items(), key=str))


def letter_to_json(l) -> object:
    if l[0] in ("w", "u"):
        return l[1]
    if l[0] == "c":
        return {"scalar": int(l[2]), "vertex": int(l[1])}
    return {"identity": l[1]}


def letter_from_json(tok, kinds: dict) -> tuple:
    if isinstance(tok, str):
        if tok not in kinds:
            raise ValueError(f"unknown generator {tok!r} in a word")
        return (kinds[tok], tok)
    if "scalar" in tok:
        return ("c", tok["vertex"], int(tok["scalar"]))
    return ("e", tok["identity"])


def sum_to_json(s: Sum) -> list:
    return [{"coef": int(c), "word": [letter_to_json(l) for l in w]} for w, c in sorted(s.items(), key=str)]


def sum_from_json(data: Iterable, kinds: dict, p: int) -> Sum:
    out: Sum = {}
    for term in data:
        if isinstance(term, dict):
            coef, word = term.get("coef", 1), term["word"]
        else:
            coef, word = 1, term
        add_into(out, tuple(letter_from_json(t, kinds) for t in word), int(coef), p)
    return out
