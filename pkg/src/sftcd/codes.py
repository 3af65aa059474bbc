"""Letter-to-letter codes between vertex shifts, and compositions of them.

A OneBlockCode maps each domain symbol to a codomain symbol and acts on
blocks and points coordinate-wise.  Sliding-block rules with memory and
anticipation are supported through recoding: the domain is replaced by its
window shift (symbols are the valid windows, edges are overlaps) on which
the rule becomes letter-to-letter.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    AlphabetMismatch,
    InvalidBlock,
    InvariantViolation,
    UnknownSymbol,
)
from .core import (
    Alphabet,
    Block,
    DEFAULT_CAP,
    PeriodicPoint,
    VertexShift,
    enumerate_blocks,
    is_irreducible,
    validate_block,
)


@dataclass(frozen=True)
class OneBlockCode:
    """Symbol map between shifts.  mapping[i] is the image of the i-th
    domain symbol.  When a codomain shift is attached the map is checked
    to be edge-compatible with it."""

    domain: VertexShift
    codomain_alphabet: Alphabet
    mapping: tuple[str, ...]
    codomain: VertexShift | None = None

    def __post_init__(self):
        if len(self.mapping) != len(self.domain.alphabet):
            raise InvariantViolation("mapping length does not match domain alphabet")
        for s in self.mapping:
            if s not in self.codomain_alphabet:
                raise UnknownSymbol(f"image symbol {s!r} not in codomain alphabet")
        if self.codomain is not None:
            if self.codomain.alphabet != self.codomain_alphabet:
                raise AlphabetMismatch(
                    "attached codomain shift disagrees with codomain alphabet"
                )
            for a, b in self.domain.allowed:
                fa, fb = self.apply_symbol(a), self.apply_symbol(b)
                if not self.codomain.allows(fa, fb):
                    raise InvariantViolation(
                        f"code is not edge-compatible: ({a!r},{b!r}) maps to "
                        f"forbidden pair ({fa!r},{fb!r})"
                    )

    @staticmethod
    def from_dict(domain, codomain_alphabet, mapping, codomain=None):
        if not isinstance(codomain_alphabet, Alphabet):
            codomain_alphabet = Alphabet(tuple(codomain_alphabet))
        missing = [s for s in domain.alphabet if s not in mapping]
        if missing:
            raise InvariantViolation(f"mapping not total, missing {missing}")
        extra = [s for s in mapping if s not in domain.alphabet]
        if extra:
            raise UnknownSymbol(f"mapping mentions unknown symbols {extra}")
        return OneBlockCode(
            domain,
            codomain_alphabet,
            tuple(mapping[s] for s in domain.alphabet),
            codomain,
        )

    @cached_property
    def symbol_map(self):
        return dict(zip(self.domain.alphabet.symbols, self.mapping))

    def apply_symbol(self, s):
        try:
            return self.symbol_map[s]
        except KeyError:
            raise UnknownSymbol(f"symbol {s!r} not in domain alphabet") from None

    @cached_property
    def letter_masks(self):
        """Codomain symbol -> bitmask of domain symbols mapping to it."""
        masks = {s: 0 for s in self.codomain_alphabet}
        for i, s in enumerate(self.mapping):
            masks[s] |= 1 << i
        return masks

    def letter_mask(self, letter):
        try:
            return self.letter_masks[letter]
        except KeyError:
            raise UnknownSymbol(f"symbol {letter!r} not in codomain alphabet") from None

    def step(self, mask, letter):
        """Forward one position: successors of mask that carry letter."""
        return self.domain.step_mask(mask) & self.letter_mask(letter)

    def step_back(self, mask, letter):
        """Backward one position: predecessors of mask that carry letter."""
        return self.domain.step_mask_back(mask) & self.letter_mask(letter)


def identity_code(shift):
    return OneBlockCode(shift, shift.alphabet, shift.alphabet.symbols, shift)


def trivial_code(shift, target="z"):
    """Collapse everything onto the one-symbol full shift."""
    z = VertexShift.full_shift((target,))
    return OneBlockCode(shift, z.alphabet, (target,) * len(shift.alphabet), z)


def apply_to_block(code, block):
    """Image of a block under the code.  The block must be valid in the
    domain shift."""
    if not validate_block(code.domain, block):
        raise InvalidBlock(f"{block.text()!r} is not a block of the domain")
    return Block(tuple(code.apply_symbol(s) for s in block.symbols))


def apply_to_point(code, point):
    """Image of a periodic point; the cycle maps coordinate-wise and the
    result is renormalised."""
    mapped = tuple(code.apply_symbol(s) for s in point.cycle.symbols)
    return PeriodicPoint.make(mapped, point.phase)


@dataclass(frozen=True)
class SlidingBlockCode:
    """Code given by a local rule reading a window of memory + anticipation
    + 1 symbols: output at i depends on input coordinates i-memory .. i+anticipation.

    rule is stored as a sorted tuple of (window symbols, output symbol) and
    must be defined on exactly the valid windows of the domain."""

    domain: VertexShift
    codomain_alphabet: Alphabet
    memory: int
    anticipation: int
    rule: tuple
    codomain: VertexShift | None = None

    def __post_init__(self):
        if self.memory < 0 or self.anticipation < 0:
            raise InvariantViolation("memory and anticipation must be >= 0")
        if self.codomain is not None and self.codomain.alphabet != self.codomain_alphabet:
            raise AlphabetMismatch(
                "attached codomain shift disagrees with codomain alphabet"
            )
        width = self.memory + self.anticipation + 1
        valid = {b.symbols for b in enumerate_blocks(self.domain, width)}
        seen = set()
        for window, out in self.rule:
            if window not in valid:
                raise InvalidBlock(f"rule window {window!r} is not a valid block")
            if window in seen:
                raise InvariantViolation(f"duplicate rule window {window!r}")
            seen.add(window)
            if out not in self.codomain_alphabet:
                raise UnknownSymbol(f"rule output {out!r} not in codomain alphabet")
        if seen != valid:
            missing = sorted(valid - seen)
            raise InvariantViolation(f"rule not total, missing windows {missing}")

    @staticmethod
    def from_dict(domain, codomain_alphabet, memory, anticipation, rule, codomain=None):
        if not isinstance(codomain_alphabet, Alphabet):
            codomain_alphabet = Alphabet(tuple(codomain_alphabet))
        items = tuple(sorted((tuple(w), out) for w, out in rule.items()))
        return SlidingBlockCode(
            domain, codomain_alphabet, memory, anticipation, items, codomain
        )

    @property
    def width(self):
        return self.memory + self.anticipation + 1

    @cached_property
    def rule_map(self):
        return dict(self.rule)

    def apply_window(self, symbols):
        try:
            return self.rule_map[tuple(symbols)]
        except KeyError:
            raise InvalidBlock(f"no rule for window {symbols!r}") from None


def apply_sliding_to_point(code, point):
    """Image of a periodic point under a sliding-block rule."""
    p = point.period
    out = tuple(
        code.apply_window(
            tuple(point.symbol_at(i + k) for k in range(-code.memory, code.anticipation + 1))
        )
        for i in range(1, p + 1)
    )
    return PeriodicPoint.make(out, 0)


@dataclass(frozen=True)
class RecodedCode:
    """Result of passing to the window shift: the letter-to-letter code
    together with the conjugacy back down (window symbol -> central symbol)."""

    window_shift: VertexShift
    conjugacy: OneBlockCode
    code: OneBlockCode
    width: int
    offset: int  # index of the central symbol inside a window (= memory)
    constituents: tuple

    @cached_property
    def window_symbols(self):
        """Window symbol name -> tuple of constituent domain symbols."""
        return dict(zip(self.window_shift.alphabet.symbols, self.constituents))

    def lift_point(self, point):
        """Image of a domain periodic point under the window conjugacy."""
        p = point.period
        names = []
        for i in range(1, p + 1):
            window = tuple(
                point.symbol_at(i + k)
                for k in range(-self.offset, self.width - self.offset)
            )
            names.append(Block(window).text())
        return PeriodicPoint.make(tuple(names), point.phase)


def recode_to_one_block(code, cap=DEFAULT_CAP):
    """Replace a sliding-block code by a letter-to-letter one on the window
    shift of its domain.  Window symbols are named by their block text and
    ordered lexicographically; w -> w' is an edge when the windows overlap
    by all but one symbol and the joint word stays valid."""
    if isinstance(code, OneBlockCode):
        raise InvariantViolation("code is already letter-to-letter")
    width = code.width
    windows = enumerate_blocks(code.domain, width, cap=cap)
    names = tuple(b.text() for b in windows)
    if len(set(names)) != len(names):
        raise InvariantViolation("window names collide")
    constituents = [b.symbols for b in windows]
    pairs = set()
    for i, w in enumerate(constituents):
        for j, w2 in enumerate(constituents):
            if w[1:] == w2[:-1] and code.domain.allows(w[-1], w2[-1]):
                pairs.add((names[i], names[j]))
    window_shift = VertexShift(Alphabet(names), frozenset(pairs))
    conj = OneBlockCode(
        window_shift,
        code.domain.alphabet,
        tuple(w[code.memory] for w in constituents),
        code.domain,
    )
    one_block = OneBlockCode(
        window_shift,
        code.codomain_alphabet,
        tuple(code.apply_window(w) for w in constituents),
        code.codomain,
    )
    return RecodedCode(
        window_shift, conj, one_block, width, code.memory, tuple(constituents)
    )


def compose(f, g):
    """The code 'g after f'.  f's codomain alphabet must equal g's domain
    alphabet and f must land inside g's domain shift."""
    if f.codomain_alphabet != g.domain.alphabet:
        raise AlphabetMismatch("codomain of f does not match domain of g")
    for a, b in f.domain.allowed:
        fa, fb = f.apply_symbol(a), f.apply_symbol(b)
        if not g.domain.allows(fa, fb):
            raise InvariantViolation(
                f"composition unsound: f maps ({a!r},{b!r}) onto pair "
                f"({fa!r},{fb!r}) forbidden in g's domain"
            )
    return OneBlockCode(
        f.domain,
        g.codomain_alphabet,
        tuple(g.apply_symbol(s) for s in f.mapping),
        g.codomain,
    )


@dataclass(frozen=True)
class OntoCheck:
    ok: bool
    certified: bool
    checked_length: int
    missing_block: Block | None = None

    def __bool__(self):
        return self.ok


def check_onto(code, codomain_shift, max_len):
    """Does every block of the codomain shift have a preimage block?

    Walks the product of the codomain graph with the subset automaton of
    fiber endpoints.  If the state space closes before max_len the verdict
    is exact (certified); otherwise it only covers blocks up to max_len.
    A failure is always certified and reports a shortest missing block.
    """
    if code.codomain_alphabet != codomain_shift.alphabet:
        raise AlphabetMismatch("codomain shift alphabet mismatch")
    start_states = []
    parents = {}
    for y in codomain_shift.alphabet:
        state = (y, code.letter_mask(y))
        parents[state] = None
        start_states.append(state)
        if state[1] == 0:
            return OntoCheck(False, True, 1, _trace_block(parents, state))
    frontier = start_states
    depth = 1
    closed = False
    while depth < max_len:
        next_frontier = []
        for state in frontier:
            y, mask = state
            for y2 in codomain_shift.successors(y):
                nxt = (y2, code.step(mask, y2))
                if nxt in parents:
                    continue
                parents[nxt] = state
                if nxt[1] == 0:
                    return OntoCheck(False, True, depth + 1, _trace_block(parents, nxt))
                next_frontier.append(nxt)
        if not next_frontier:
            closed = True
            break
        frontier = next_frontier
        depth += 1
    return OntoCheck(True, closed, depth, None)


def _trace_block(parents, state):
    symbols = []
    while state is not None:
        symbols.append(state[0])
        state = parents[state]
    return Block(tuple(reversed(symbols)))


def is_finite_to_one(code):
    """Exact test: the code on an irreducible domain is finite-to-one iff
    no two distinct equal-image paths share both endpoints.  Runs on the
    pair graph of ordered same-image symbol pairs; the bad pattern is a
    path from a diagonal node through an off-diagonal node back to the
    diagonal."""
    domain = code.domain
    symbols = domain.alphabet.symbols
    nodes = [
        (a, b)
        for a in symbols
        for b in symbols
        if code.apply_symbol(a) == code.apply_symbol(b)
    ]
    succ = {}
    for a, b in nodes:
        outs = []
        for a2 in domain.successors(a):
            for b2 in domain.successors(b):
                if code.apply_symbol(a2) == code.apply_symbol(b2):
                    outs.append((a2, b2))
        succ[(a, b)] = outs
    diagonal = [(a, a) for a in symbols]
    # forward from the diagonal
    seen = set(diagonal)
    queue = deque(diagonal)
    while queue:
        node = queue.popleft()
        for nxt in succ[node]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    off = [p for p in seen if p[0] != p[1]]
    # can an off-diagonal node reached from the diagonal get back to it?
    seen2 = set(off)
    queue = deque(off)
    while queue:
        node = queue.popleft()
        if node[0] == node[1]:
            return False
        for nxt in succ[node]:
            if nxt not in seen2:
                seen2.add(nxt)
                queue.append(nxt)
    return True


@dataclass(frozen=True)
class CodeTriple:
    """A composition X --phi--> Y --psi--> Z of letter-to-letter codes,
    with pi always the stored composite of the two."""

    X: VertexShift
    Y: VertexShift
    Z_alphabet: Alphabet
    phi: OneBlockCode
    psi: OneBlockCode
    pi: OneBlockCode

    def __post_init__(self):
        if self.phi.domain != self.X:
            raise InvariantViolation("phi's domain is not X")
        if self.phi.codomain != self.Y:
            raise InvariantViolation("phi's codomain shift is not Y")
        if self.psi.domain != self.Y:
            raise InvariantViolation("psi's domain is not Y")
        if self.psi.codomain_alphabet != self.Z_alphabet:
            raise InvariantViolation("psi's codomain alphabet is not Z_alphabet")
        expected = tuple(self.psi.apply_symbol(s) for s in self.phi.mapping)
        if self.pi.mapping != expected or self.pi.domain != self.X:
            raise InvariantViolation("pi is not the composite of phi and psi")

    @staticmethod
    def build(phi, psi, onto_len=None, check=True):
        """Assemble and verify a triple.  phi must carry its codomain shift;
        irreducibility of X and Y and surjectivity of phi are enforced."""
        if phi.codomain is None:
            raise InvariantViolation("phi needs an attached codomain shift")
        X, Y = phi.domain, phi.codomain
        if psi.domain != Y:
            raise AlphabetMismatch("psi's domain shift is not phi's codomain")
        pi = compose(phi, psi)
        triple = CodeTriple(X, Y, psi.codomain_alphabet, phi, psi, pi)
        if check:
            if not is_irreducible(X):
                raise InvariantViolation("X is not irreducible")
            if not is_irreducible(Y):
                raise InvariantViolation("Y is not irreducible")
            if onto_len is None:
                onto_len = 2 ** len(X.alphabet) * len(Y.alphabet) + 1
            onto = check_onto(phi, Y, onto_len)
            if not onto.ok:
                raise InvariantViolation(
                    f"phi is not onto: block {onto.missing_block.text()!r} has no preimage"
                )
            if not onto.certified:
                raise InvariantViolation("phi's surjectivity check did not certify")
        return triple

    @property
    def Z_shift(self):
        return self.psi.codomain

    def psi_word(self, word):
        return tuple(self.psi.apply_symbol(s) for s in word)
