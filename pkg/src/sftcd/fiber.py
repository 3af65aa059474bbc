"""Fibers of blocks under a letter-to-letter code.

The preimage set of a codomain word is handled as a layered graph: layer i
holds the domain symbols that can sit at coordinate i of a preimage.  A
forward sweep and a backward sweep prune the layers so that exactly the
symbols lying on complete preimage paths remain.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import Block, DEFAULT_CAP, iter_bits
from .errors import InvalidBlock, NotFiniteToOne, ResourceLimit, UnknownSymbol


def forward_layers(code, word):
    """Raw forward filter: layers[i] = symbols carrying word[i] reachable
    from layer i-1.  Returns None as soon as a layer dies."""
    layers = [code.letter_mask(word[0])]
    if layers[0] == 0:
        return None
    for letter in word[1:]:
        nxt = code.step(layers[-1], letter)
        if nxt == 0:
            return None
        layers.append(nxt)
    return layers


def pruned_layers(code, word):
    """Layers restricted to complete preimage paths, or None for an empty
    fiber."""
    layers = forward_layers(code, word)
    if layers is None:
        return None
    for i in range(len(layers) - 2, -1, -1):
        layers[i] &= code.domain.step_mask_back(layers[i + 1])
        if layers[i] == 0:
            return None
    return layers


def _check_word(code, block):
    for s in block.symbols:
        if s not in code.codomain_alphabet:
            raise UnknownSymbol(f"symbol {s!r} not in codomain alphabet")
    return tuple(block.symbols)


def iter_fiber(code, word_layers, cap=DEFAULT_CAP):
    """Yield preimage paths through pruned layers in lexicographic order
    of domain symbol indices."""
    if word_layers is None:
        return
    domain = code.domain
    length = len(word_layers)
    count = 0
    stack = [(i,) for i in reversed(list(iter_bits(word_layers[0])))]
    while stack:
        path = stack.pop()
        if len(path) == length:
            count += 1
            if count > cap:
                raise ResourceLimit(f"fiber larger than {cap} blocks")
            yield path
            continue
        nxt = domain.succ_masks[path[-1]] & word_layers[len(path)]
        for j in reversed(list(iter_bits(nxt))):
            stack.append(path + (j,))


@dataclass(frozen=True)
class FiberSlice:
    """All preimage blocks of a word, with the per-coordinate symbol sets."""

    w: Block
    preimages: tuple
    by_coordinate: tuple

    def __len__(self):
        return len(self.preimages)


def preimage_blocks(code, w, cap=DEFAULT_CAP):
    word = _check_word(code, w)
    layers = pruned_layers(code, word)
    symbols = code.domain.alphabet.symbols
    if layers is None:
        return FiberSlice(w, (), tuple(() for _ in word))
    pre = tuple(
        Block(tuple(symbols[i] for i in path)) for path in iter_fiber(code, layers, cap)
    )
    by_coord = tuple(tuple(symbols[i] for i in iter_bits(m)) for m in layers)
    return FiberSlice(w, pre, by_coord)


def preimage_symbol_count(code, w, i):
    """Number of distinct symbols occurring at coordinate i (1-based)
    among the preimages of w.  Zero when the fiber is empty."""
    word = _check_word(code, w)
    if not 1 <= i <= len(word):
        raise InvalidBlock(f"coordinate {i} outside 1..{len(word)}")
    layers = pruned_layers(code, word)
    if layers is None:
        return 0
    return layers[i - 1].bit_count()


@dataclass(frozen=True)
class StabilizationInfo:
    scanned_length: int
    plateau: int
    stabilized: bool


@dataclass(frozen=True)
class MagicBlockResult:
    block: Block
    coordinate: int
    value: int
    certified: StabilizationInfo


def _stabilized(cumulative, plateau):
    if not cumulative:
        return False
    if cumulative[-1] == 1:
        return True
    if len(cumulative) <= plateau:
        return False
    return cumulative[-1] == cumulative[-1 - plateau]


def find_magic_block(code, max_len, plateau=3, cap=DEFAULT_CAP):
    """Minimise the per-coordinate preimage symbol count over all codomain
    blocks of length <= max_len.

    Extending a block can only shrink the count at the surviving
    coordinates, so the running minimum is non-increasing in the length;
    the scan stops early once it reaches 1.  Ties break to the shortest
    block, then lexicographic, then the smallest coordinate.
    """
    if max_len < 1:
        raise InvalidBlock("max_len must be positive")
    symbols = code.domain.alphabet.symbols
    best = None  # (value, word, coordinate)
    cumulative = []
    scanned = 0
    # level entries: (word, forward layer history)
    level = []
    for letter in code.codomain_alphabet:
        mask = code.letter_mask(letter)
        if mask:
            level.append(((letter,), [mask]))
    total = 0
    while level:
        scanned += 1
        for word, fwd in level:
            total += 1
            if total > cap:
                raise ResourceLimit(f"scanned more than {cap} blocks")
            back = fwd[-1]
            counts = [back.bit_count()]
            for i in range(len(fwd) - 2, -1, -1):
                back = fwd[i] & code.domain.step_mask_back(back)
                counts.append(back.bit_count())
            counts.reverse()
            for idx, c in enumerate(counts):
                if best is None or c < best[0]:
                    best = (c, word, idx + 1)
        cumulative.append(best[0])
        if best[0] == 1 or scanned == max_len:
            break
        nxt = []
        for word, fwd in level:
            for letter in code.codomain_alphabet:
                mask = code.step(fwd[-1], letter)
                if mask:
                    nxt.append((word + (letter,), fwd + [mask]))
        level = nxt
    if best is None:
        raise InvalidBlock("codomain language is empty")
    info = StabilizationInfo(scanned, plateau, _stabilized(cumulative, plateau))
    value, word, coord = best
    return MagicBlockResult(Block(tuple(word)), coord, value, info)


def degree_finite_to_one(code, max_len, plateau=3, cap=DEFAULT_CAP):
    """Preimage count of typical points of a finite-to-one code, read off
    the magic block minimum."""
    from .codes import is_finite_to_one

    if not is_finite_to_one(code):
        raise NotFiniteToOne("code has unboundedly many preimages")
    return find_magic_block(code, max_len, plateau, cap).value
