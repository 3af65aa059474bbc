"""Routing depth of blocks and class degrees of codes.

The central question: given a codomain block w, how small can a set M of
domain symbols be so that, at some position n, every preimage of w can be
rerouted through M?  Rerouting a preimage u means finding a witness block v
in the relevant fiber with the same first and last symbol as u and with
v|_n in M.  The depth of w is the smallest such |M|; minimising over all
blocks gives the class degree of the code.

In the relative flavour, attached to a composition phi then psi, the
preimages u run over the phi-fiber of w but the witnesses v may use the
larger fiber of the composite over psi(w).  This asymmetry is essential
and deliberately not collapsed.

All reachability is done on the layered fiber graph with bitmask layers:
a routing set R_n(s, t) = (forward set of s at n) & (backward set of t at
n) lists the symbols through which some witness from s to t passes at
position n.  w is presented through M at n exactly when M hits every
routing set of an occurring endpoint pair, so the depth of w is a minimum
hitting set size, found exhaustively in increasing size order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .core import Block, DEFAULT_CAP, blocks_of_periodic_point, is_irreducible, is_point_of, iter_bits
from .errors import (
    EmptyFiber,
    InvalidBlock,
    PreconditionUnmet,
    ResourceLimit,
    UnknownSymbol,
)
from .fiber import _check_word, _stabilized, iter_fiber, pruned_layers


class _Reach:
    """Per-start forward sets and per-end backward sets over the pruned
    layers of one word's fiber."""

    __slots__ = ("code", "word", "length", "layers", "fs", "bs")

    def __init__(self, code, word):
        self.code = code
        self.word = word
        self.length = len(word)
        self.layers = pruned_layers(code, word)
        self.fs = {}
        self.bs = {}
        if self.layers is None:
            return
        dom = code.domain
        n = self.length
        for s in iter_bits(self.layers[0]):
            hist = [1 << s]
            for i in range(1, n):
                hist.append(dom.step_mask(hist[-1]) & self.layers[i])
            self.fs[s] = hist
        for t in iter_bits(self.layers[-1]):
            hist = [0] * n
            hist[-1] = 1 << t
            for i in range(n - 2, -1, -1):
                hist[i] = dom.step_mask_back(hist[i + 1]) & self.layers[i]
            self.bs[t] = hist

    @property
    def empty(self):
        return self.layers is None

    def endpoints(self):
        return [
            (s, t) for s, hist in self.fs.items() for t in iter_bits(hist[-1])
        ]

    def route(self, n, s, t):
        return self.fs[s][n - 1] & self.bs[t][n - 1]

    def lex_path_through(self, s, m, t, n):
        """Least complete path (by symbol index) from s through m at
        position n to t, or None when no such path exists."""
        length = self.length
        dom = self.code.domain
        toward_m = [0] * n
        toward_m[n - 1] = 1 << m
        for i in range(n - 2, -1, -1):
            toward_m[i] = dom.step_mask_back(toward_m[i + 1]) & self.layers[i]
        if not (toward_m[0] >> s) & 1:
            return None
        tail = length - n + 1
        toward_t = [0] * tail
        toward_t[-1] = 1 << t
        for k in range(tail - 2, -1, -1):
            toward_t[k] = dom.step_mask_back(toward_t[k + 1]) & self.layers[n - 1 + k]
        if not (toward_t[0] >> m) & 1:
            return None
        path = [s]
        for i in range(1, n):
            path.append(next(iter_bits(dom.succ_masks[path[-1]] & toward_m[i])))
        for k in range(1, tail):
            path.append(next(iter_bits(dom.succ_masks[path[-1]] & toward_t[k])))
        return tuple(path)


def _depth_search(e_pairs, fs, bs, length, limit=None):
    """Minimum hitting set over routing families.

    Tries sizes 1, 2, ... up to limit (inclusive) when given, otherwise up
    to the guaranteed bound.  Returns (size, position, mask) with the
    smallest size, breaking ties towards the smallest position and then
    the lexicographically least symbol set, or None when every solution
    exceeds limit.
    """
    families = []
    for n in range(1, length + 1):
        seen = set()
        inter = -1
        for s, t in e_pairs:
            r = fs[s][n - 1] & bs[t][n - 1]
            inter &= r
            seen.add(r)
        if inter:
            return 1, n, 1 << next(iter_bits(inter))
        families.append(sorted(seen))
    bound = min(len(f) for f in families)
    if limit is not None:
        bound = min(bound, limit)
    for k in range(2, bound + 1):
        for n0, fam in enumerate(families):
            union = 0
            for r in fam:
                union |= r
            idxs = list(iter_bits(union))
            if len(idxs) < k:
                continue
            for combo in combinations(idxs, k):
                mask = 0
                for i in combo:
                    mask |= 1 << i
                if all(r & mask for r in fam):
                    return k, n0 + 1, mask
    if limit is None:
        raise AssertionError("hitting set search must succeed when unlimited")
    return None


@dataclass(frozen=True)
class RoutingCertificate:
    """Witness that w is presented through M at position n: for every
    preimage u a fiber block v with matching endpoints and v|_n in M."""

    w: Block
    n: int
    M: tuple
    witnesses: tuple  # pairs (u, v)
    mode: str

    def __bool__(self):
        return True

    def witness_for(self, u):
        for a, b in self.witnesses:
            if a == u:
                return b
        return None


@dataclass(frozen=True)
class RoutingRefusal:
    w: Block
    n: int
    M: tuple
    blocking: Block
    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class DepthResult:
    w: Block
    value: int
    certificate: RoutingCertificate


@dataclass(frozen=True)
class DegreeEstimate:
    value: int
    scanned_length: int
    stabilized: bool
    minimal_block: Block


def _mask_of(code, M):
    mask = 0
    for s in M:
        mask |= 1 << code.domain.alphabet.index(s)
    return mask


def _routing_outcome(u_code, u_layers, wit, w, M, n, mode, cap):
    """Shared core of the presentation checks: route every u-fiber path
    through M at n inside the witness reach, or name a blocker."""
    if not 1 <= n <= len(w):
        raise InvalidBlock(f"position {n} outside 1..{len(w)}")
    m_sorted = tuple(sorted(M, key=u_code.domain.alphabet.index))
    m_mask = _mask_of(u_code, m_sorted)
    symbols = u_code.domain.alphabet.symbols
    witnesses = []
    cache = {}
    for path in iter_fiber(u_code, u_layers, cap):
        key = (path[0], path[-1])
        v = cache.get(key)
        if v is None:
            routable = wit.route(n, path[0], path[-1]) & m_mask
            if routable == 0:
                u = Block(tuple(symbols[i] for i in path))
                return RoutingRefusal(
                    w,
                    n,
                    m_sorted,
                    u,
                    "no fiber block with these endpoints passes through M "
                    f"at position {n}",
                )
            through = next(iter_bits(routable))
            v = wit.lex_path_through(path[0], through, path[-1], n)
            cache[key] = v
        witnesses.append(
            (
                Block(tuple(symbols[i] for i in path)),
                Block(tuple(symbols[i] for i in v)),
            )
        )
    return RoutingCertificate(w, n, m_sorted, tuple(witnesses), mode)


def is_presented(code, w, M, n, cap=DEFAULT_CAP):
    """Certificate or refusal for routing w's own fiber through M at n."""
    word = _check_word(code, w)
    for s in M:
        if s not in code.domain.alphabet:
            raise UnknownSymbol(f"symbol {s!r} not in domain alphabet")
    wit = _Reach(code, word)
    if wit.empty:
        raise EmptyFiber(f"{w.text()!r} has no preimage")
    return _routing_outcome(code, wit.layers, wit, w, M, n, "absolute", cap)


def depth(code, w, cap=DEFAULT_CAP):
    """Smallest |M| presenting w at some position, with a certificate."""
    word = _check_word(code, w)
    wit = _Reach(code, word)
    if wit.empty:
        raise EmptyFiber(f"{w.text()!r} has no preimage")
    size, n, mask = _depth_search(wit.endpoints(), wit.fs, wit.bs, len(word))
    symbols = code.domain.alphabet.symbols
    M = tuple(symbols[i] for i in iter_bits(mask))
    cert = _routing_outcome(code, wit.layers, wit, w, M, n, "absolute", cap)
    assert isinstance(cert, RoutingCertificate)
    return DepthResult(w, size, cert)


def relative_is_presented(triple, w, M, n, cap=DEFAULT_CAP):
    """Like is_presented, but preimages run over the phi-fiber of w while
    witnesses may use the whole composite fiber over psi(w)."""
    word = _check_word(triple.phi, w)
    for s in M:
        if s not in triple.X.alphabet:
            raise UnknownSymbol(f"symbol {s!r} not in domain alphabet")
    u_layers = pruned_layers(triple.phi, word)
    if u_layers is None:
        raise EmptyFiber(f"{w.text()!r} has no phi-preimage")
    wit = _Reach(triple.pi, triple.psi_word(word))
    return _routing_outcome(triple.phi, u_layers, wit, w, M, n, "relative", cap)


def relative_depth(triple, w, cap=DEFAULT_CAP):
    word = _check_word(triple.phi, w)
    u_reach = _Reach(triple.phi, word)
    if u_reach.empty:
        raise EmptyFiber(f"{w.text()!r} has no phi-preimage")
    wit = _Reach(triple.pi, triple.psi_word(word))
    size, n, mask = _depth_search(u_reach.endpoints(), wit.fs, wit.bs, len(word))
    symbols = triple.X.alphabet.symbols
    M = tuple(symbols[i] for i in iter_bits(mask))
    cert = _routing_outcome(triple.phi, u_reach.layers, wit, w, M, n, "relative", cap)
    assert isinstance(cert, RoutingCertificate)
    return DepthResult(w, size, cert)


@lru_cache(maxsize=None)
def _scan_preconditions(code):
    from .codes import check_onto

    if not is_irreducible(code.domain):
        raise PreconditionUnmet("domain is not irreducible")
    if code.codomain is not None:
        bound = 2 ** len(code.domain.alphabet) * len(code.codomain.alphabet) + 1
        onto = check_onto(code, code.codomain, bound)
        if not onto.ok:
            raise PreconditionUnmet(
                f"code is not onto its codomain: {onto.missing_block.text()!r} "
                "has no preimage"
            )
    return True


def _finish_estimate(best, cumulative, plateau):
    value, word = best
    return DegreeEstimate(
        value, len(cumulative), _stabilized(cumulative, plateau), Block(tuple(word))
    )


def class_degree(code, max_len, plateau=3, cap=DEFAULT_CAP):
    """Minimum depth over all codomain blocks of length <= max_len.

    Extending a block never increases its depth (reroute the inner window
    and splice), so the running minimum is non-increasing in the length;
    it equals the class degree of the code once a minimising block falls
    inside the scan.  The estimate is marked stabilized when it reached
    the floor 1 or sat unchanged for `plateau` length increments.
    """
    if max_len < 1:
        raise InvalidBlock("max_len must be positive")
    _scan_preconditions(code)
    dom = code.domain
    level = []
    for letter in code.codomain_alphabet:
        mask = code.letter_mask(letter)
        if mask:
            level.append(((letter,), {s: (1 << s,) for s in iter_bits(mask)}))
    best = None
    cumulative = []
    total = 0
    while level:
        for word, fs in level:
            total += 1
            if total > cap:
                raise ResourceLimit(f"scanned more than {cap} blocks")
            limit = None if best is None else best[0] - 1
            found = _eval_absolute(code, word, fs, limit)
            if found is not None and (best is None or found < best[0]):
                best = (found, word)
        cumulative.append(best[0])
        if best[0] == 1 or len(cumulative) == max_len:
            break
        nxt = []
        for word, fs in level:
            for letter in code.codomain_alphabet:
                fs2 = {}
                for s, hist in fs.items():
                    stepped = code.step(hist[-1], letter)
                    if stepped:
                        fs2[s] = hist + (stepped,)
                if fs2:
                    nxt.append((word + (letter,), fs2))
        level = nxt
    if best is None:
        raise EmptyFiber("the code has an empty image language")
    return _finish_estimate(best, cumulative, plateau)


def _eval_absolute(code, word, fs, limit):
    """Depth of one block during an absolute scan, where fs already holds
    the forward history of the block's own fiber.  Returns None when the
    depth exceeds limit."""
    length = len(word)
    ends = 0
    for hist in fs.values():
        ends |= hist[-1]
    bs = {}
    for t in iter_bits(ends):
        hist = [0] * length
        hist[-1] = 1 << t
        for i in range(length - 2, -1, -1):
            hist[i] = code.step_back(hist[i + 1], word[i])
        bs[t] = hist
    pairs = [(s, t) for s, hist in fs.items() for t in iter_bits(hist[-1])]
    result = _depth_search(pairs, fs, bs, length, limit)
    return None if result is None else result[0]


def relative_class_degree(triple, max_len, plateau=3, cap=DEFAULT_CAP):
    """Minimum relative depth over blocks of Y of length <= max_len, with
    the same monotonicity and stabilization notions as class_degree."""
    if max_len < 1:
        raise InvalidBlock("max_len must be positive")
    phi = triple.phi
    level = []
    for letter in phi.codomain_alphabet:
        mask = phi.letter_mask(letter)
        if mask:
            level.append(((letter,), {s: 1 << s for s in iter_bits(mask)}))
    reach_cache = {}
    best = None
    cumulative = []
    total = 0
    while level:
        for word, frontier in level:
            total += 1
            if total > cap:
                raise ResourceLimit(f"scanned more than {cap} blocks")
            image = triple.psi_word(word)
            wit = reach_cache.get(image)
            if wit is None:
                wit = _Reach(triple.pi, image)
                reach_cache[image] = wit
            pairs = [(s, t) for s, f in frontier.items() for t in iter_bits(f)]
            limit = None if best is None else best[0] - 1
            result = _depth_search(pairs, wit.fs, wit.bs, len(word), limit)
            if result is not None and (best is None or result[0] < best[0]):
                best = (result[0], word)
        cumulative.append(best[0])
        if best[0] == 1 or len(cumulative) == max_len:
            break
        nxt = []
        for word, frontier in level:
            for letter in phi.codomain_alphabet:
                frontier2 = {}
                for s, f in frontier.items():
                    stepped = phi.step(f, letter)
                    if stepped:
                        frontier2[s] = stepped
                if frontier2:
                    nxt.append((word + (letter,), frontier2))
        level = nxt
    if best is None:
        raise EmptyFiber("phi has an empty image language")
    return _finish_estimate(best, cumulative, plateau)


def periodic_point_relative_degree(triple, y, max_len, plateau=3, cap=DEFAULT_CAP):
    """Minimum relative depth over the blocks occurring in the periodic
    point y, scanned by increasing length."""
    if max_len < 1:
        raise InvalidBlock("max_len must be positive")
    if not is_point_of(triple.Y, y):
        raise PreconditionUnmet(f"{y.text()} is not a point of Y")
    best = None
    cumulative = []
    for length in range(1, max_len + 1):
        for w in blocks_of_periodic_point(y, length):
            word = w.symbols
            u_reach = _Reach(triple.phi, word)
            if u_reach.empty:
                raise EmptyFiber(f"{w.text()!r} has no phi-preimage")
            wit = _Reach(triple.pi, triple.psi_word(word))
            limit = None if best is None else best[0] - 1
            result = _depth_search(
                u_reach.endpoints(), wit.fs, wit.bs, length, limit
            )
            if result is not None and (best is None or result[0] < best[0]):
                best = (result[0], word)
        cumulative.append(best[0])
        if best[0] == 1:
            break
    return _finish_estimate(best, cumulative, plateau)


def verify_certificate(subject, cert):
    """Mechanically replay a routing certificate against a code (absolute
    mode) or a triple (relative mode).  True when every preimage is
    covered and every witness is a fiber block with matching endpoints
    passing through M at n."""
    from .codes import CodeTriple

    if cert.mode == "relative":
        if not isinstance(subject, CodeTriple):
            return False
        u_code, wit_code = subject.phi, subject.pi
        wit_word = subject.psi_word(cert.w.symbols)
    else:
        u_code, wit_code = subject, subject
        wit_word = cert.w.symbols
    u_layers = pruned_layers(u_code, cert.w.symbols)
    if u_layers is None:
        return False
    idx = u_code.domain.alphabet.index
    expected = {
        tuple(path) for path in iter_fiber(u_code, u_layers)
    }
    got = {tuple(idx(s) for s in u.symbols) for u, _ in cert.witnesses}
    if expected != got:
        return False
    wit_layers = pruned_layers(wit_code, wit_word)
    if wit_layers is None:
        return False
    n = cert.n
    m_set = set(cert.M)
    for u, v in cert.witnesses:
        if len(v) != len(cert.w):
            return False
        vpath = tuple(idx(s) for s in v.symbols)
        for i, b in enumerate(vpath):
            if not (wit_layers[i] >> b) & 1:
                return False
        for a, b in zip(vpath, vpath[1:]):
            if not (u_code.domain.succ_masks[a] >> b) & 1:
                return False
        if v.symbols[0] != u.symbols[0] or v.symbols[-1] != u.symbols[-1]:
            return False
        if v.symbols[n - 1] not in m_set:
            return False
    return True
