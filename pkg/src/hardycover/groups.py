"""Free words and explicit presentations of surface groups and their doubles.

A compact bordered surface with genus ``s`` and ``k`` boundary circles has a
fundamental group generated by boundary loops ``A0..A{k-1}`` and handle pairs
``A'i, B'i`` subject to a single relation.  Its Schottky double is a closed
surface of genus ``2s + k - 1`` whose fundamental group carries the mirror
involution ``tau`` acting on generators.  This module is the exact, purely
combinatorial kernel: words are tuples of signed generator indices, always
kept freely reduced, and every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

__all__ = [
    "InvalidSurfaceError",
    "Generator",
    "Word",
    "GroupPresentation",
    "DoubledPresentation",
    "surface_group",
    "double_group",
    "apply_involution",
    "boundary_loop",
    "mirror_monodromy",
    "presentation_to_json",
    "presentation_from_json",
    "word_to_json",
    "word_from_json",
]


class InvalidSurfaceError(ValueError):
    """Parameters (s, k) do not describe a bordered surface."""


Letter = tuple[int, int]


def _free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for gen, exp in letters:
        if out and out[-1][0] == gen and out[-1][1] == -exp:
            out.pop()
        else:
            out.append((gen, exp))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """Freely reduced word over a fixed generator alphabet.

    ``letters`` is a sequence of ``(generator index, +1 or -1)`` pairs; the
    empty sequence is the identity.  Construction reduces the input, so no
    unreduced word ever exists.
    """

    letters: tuple[Letter, ...]
    alphabet: tuple[str, ...]

    def __post_init__(self) -> None:
        for gen, exp in self.letters:
            if not 0 <= gen < len(self.alphabet):
                raise ValueError(f"generator index {gen} outside alphabet")
            if exp not in (-1, 1):
                raise ValueError(f"letter exponent must be +1 or -1, got {exp}")
        object.__setattr__(self, "letters", _free_reduce(self.letters))

    def __mul__(self, other: "Word") -> "Word":
        if self.alphabet != other.alphabet:
            raise ValueError("words over mismatched generator sets")
        return Word(self.letters + other.letters, self.alphabet)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)), self.alphabet)

    def __pow__(self, exponent: int) -> "Word":
        base = self if exponent >= 0 else self.inverse()
        result = Word((), self.alphabet)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(
            self.alphabet[g] + ("" if e > 0 else "^-1") for g, e in self.letters
        )

    def __repr__(self) -> str:
        return f"Word({self})"


@dataclass(frozen=True)
class Generator:
    label: str
    index: int


def _check_surface_params(s: int, k: int) -> None:
    if not (isinstance(s, int) and isinstance(k, int)):
        raise InvalidSurfaceError(f"genus and boundary count must be integers, got ({s!r}, {k!r})")
    if s < 0 or k < 1:
        raise InvalidSurfaceError(
            f"no bordered surface with genus {s} and {k} boundary components"
        )


class _PresentationMixin:
    """Word construction helpers shared by both presentation kinds."""

    generators: tuple[Generator, ...]

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(g.label for g in self.generators)

    @property
    def relators(self) -> tuple[Word, ...]:
        return (self.relator,)  # type: ignore[attr-defined]

    def identity(self) -> Word:
        return Word((), self.alphabet)

    def gen(self, label: str, exponent: int = 1) -> Word:
        try:
            index = self.alphabet.index(label)
        except ValueError:
            raise ValueError(f"unknown generator {label!r}") from None
        return Word(((index, 1),), self.alphabet) ** exponent

    def word(self, pairs: Iterable[tuple[str, int]]) -> Word:
        """Build a word from (label, exponent) pairs; exponents may be any integer."""
        result = self.identity()
        for label, exponent in pairs:
            result = result * self.gen(label, exponent)
        return result


@dataclass(frozen=True)
class GroupPresentation(_PresentationMixin):
    """Fundamental group of a bordered surface: genus ``s``, ``k`` boundary circles."""

    s: int
    k: int
    generators: tuple[Generator, ...]
    relator: Word


@dataclass(frozen=True)
class DoubledPresentation(_PresentationMixin):
    """Fundamental group of the Schottky double, with the mirror involution.

    ``tau`` maps each generator (by index) to its image word under the
    anti-holomorphic involution; ``genus`` is the genus of the double.
    """

    s: int
    k: int
    generators: tuple[Generator, ...]
    relator: Word
    tau: tuple[Word, ...]
    genus: int


def _commutator(a: int, b: int) -> list[Letter]:
    return [(a, 1), (b, 1), (a, -1), (b, -1)]


def surface_group(s: int, k: int) -> GroupPresentation:
    """Presentation of the fundamental group of a genus-``s`` surface with ``k`` boundary circles.

    Generators are the boundary loops ``A0..A{k-1}`` followed by the handle
    pairs ``A'1, B'1, ..., A's, B's``; the single relator is the product of
    handle commutators followed by ``A{k-1} ... A1 A0``.
    """
    _check_surface_params(s, k)
    labels = [f"A{j}" for j in range(k)]
    for i in range(1, s + 1):
        labels += [f"A'{i}", f"B'{i}"]
    gens = tuple(Generator(lbl, idx) for idx, lbl in enumerate(labels))
    index = {g.label: g.index for g in gens}

    letters: list[Letter] = []
    for i in range(1, s + 1):
        letters += _commutator(index[f"A'{i}"], index[f"B'{i}"])
    for j in range(k - 1, -1, -1):
        letters.append((index[f"A{j}"], 1))
    relator = Word(tuple(letters), tuple(labels))
    return GroupPresentation(s=s, k=k, generators=gens, relator=relator)


def double_group(s: int, k: int) -> DoubledPresentation:
    """Presentation of the fundamental group of the Schottky double.

    Generators: ``A1, B1, ..., A{k-1}, B{k-1}`` (one pair per boundary circle
    past the first), then ``A'i, B'i`` and their mirror images ``A''i, B''i``.
    The involution acts by ``B_j -> B_j^-1``, ``A_j -> B_j A_j B_j^-1`` and
    swaps primed handles with double-primed ones.
    """
    _check_surface_params(s, k)
    labels: list[str] = []
    for j in range(1, k):
        labels += [f"A{j}", f"B{j}"]
    for i in range(1, s + 1):
        labels += [f"A'{i}", f"B'{i}"]
    for i in range(1, s + 1):
        labels += [f"A''{i}", f"B''{i}"]
    gens = tuple(Generator(lbl, idx) for idx, lbl in enumerate(labels))
    alphabet = tuple(labels)
    index = {g.label: g.index for g in gens}

    letters: list[Letter] = []
    for i in range(s, 0, -1):
        letters += _commutator(index[f"A''{i}"], index[f"B''{i}"])
    for i in range(1, s + 1):
        letters += _commutator(index[f"A'{i}"], index[f"B'{i}"])
    for j in range(k - 1, 0, -1):
        letters.append((index[f"A{j}"], 1))
    for j in range(1, k):
        letters += [(index[f"B{j}"], 1), (index[f"A{j}"], -1), (index[f"B{j}"], -1)]
    relator = Word(tuple(letters), alphabet)

    tau_words: list[Word] = []
    for g in gens:
        lbl = g.label
        if lbl.startswith("A''"):
            image = [(index["B'" + lbl[3:]], 1)]
        elif lbl.startswith("B''"):
            image = [(index["A'" + lbl[3:]], 1)]
        elif lbl.startswith("A'"):
            image = [(index["B''" + lbl[2:]], 1)]
        elif lbl.startswith("B'"):
            image = [(index["A''" + lbl[2:]], 1)]
        elif lbl.startswith("B"):
            image = [(g.index, -1)]
        else:  # A_j
            b = index["B" + lbl[1:]]
            image = [(b, 1), (g.index, 1), (b, -1)]
        tau_words.append(Word(tuple(image), alphabet))

    return DoubledPresentation(
        s=s,
        k=k,
        generators=gens,
        relator=relator,
        tau=tuple(tau_words),
        genus=2 * s + k - 1,
    )


def apply_involution(p: DoubledPresentation, w: Word) -> Word:
    """Image of ``w`` under the mirror involution, freely reduced.

    Substitutes each letter by its ``tau`` image (inverted for inverse
    letters), so the map respects inversion and squares to the identity.
    """
    if w.alphabet != p.alphabet:
        raise ValueError("word not over this presentation's generators")
    result = p.identity()
    for gen, exp in w.letters:
        image = p.tau[gen] if exp > 0 else p.tau[gen].inverse()
        result = result * image
    return result


def boundary_loop(p: DoubledPresentation | GroupPresentation, component: int) -> Word:
    """The loop around boundary circle ``component`` as a word in ``p``'s generators.

    On the bordered surface every ``A_i`` is a generator.  On the double,
    ``A0`` is eliminated by the surface relation, so component 0 is expressed
    through the remaining generators.
    """
    if not 0 <= component < p.k:
        raise ValueError(f"no boundary component {component} (k = {p.k})")
    if isinstance(p, GroupPresentation) or component > 0:
        return p.gen(f"A{component}")
    pairs: list[tuple[str, int]] = []
    for i in range(1, p.s + 1):
        pairs += [(f"A'{i}", 1), (f"B'{i}", 1), (f"A'{i}", -1), (f"B'{i}", -1)]
    for j in range(p.k - 1, 0, -1):
        pairs.append((f"A{j}", 1))
    return p.word(pairs).inverse()


def mirror_monodromy(p: DoubledPresentation, component: int) -> Word:
    """Deck element carrying a boundary lift on the chosen sheet to its mirror image.

    Identity over component 0; the crossing loop ``B_i`` over component
    ``i >= 1``.
    """
    if not 0 <= component < p.k:
        raise ValueError(f"no boundary component {component} (k = {p.k})")
    if component == 0:
        return p.identity()
    return p.gen(f"B{component}")


def word_to_json(w: Word) -> list[list]:
    return [[w.alphabet[g], e] for g, e in w.letters]


def word_from_json(data: Iterable, alphabet: tuple[str, ...]) -> Word:
    lookup = {label: i for i, label in enumerate(alphabet)}
    letters = []
    for label, exp in data:
        if label not in lookup:
            raise ValueError(f"unknown generator {label!r}")
        letters.append((lookup[label], int(exp)))
    return Word(tuple(letters), alphabet)


def presentation_to_json(p: GroupPresentation | DoubledPresentation) -> dict:
    doc = {
        "s": p.s,
        "k": p.k,
        "generators": list(p.alphabet),
        "relator": word_to_json(p.relator),
    }
    if isinstance(p, DoubledPresentation):
        doc["tau"] = {
            g.label: word_to_json(p.tau[g.index]) for g in p.generators
        }
        doc["genus"] = p.genus
    return doc


def presentation_from_json(doc: Mapping) -> GroupPresentation | DoubledPresentation:
    """Rebuild a presentation from its JSON form and check it against (s, k)."""
    s, k = int(doc["s"]), int(doc["k"])
    rebuilt = double_group(s, k) if "tau" in doc else surface_group(s, k)
    if list(rebuilt.alphabet) != list(doc["generators"]):
        raise ValueError("generator list does not match the (s, k) presentation")
    if rebuilt.relator != word_from_json(doc["relator"], rebuilt.alphabet):
        raise ValueError("relator does not match the (s, k) presentation")
    return rebuilt
