"""Bridges between points of a fiber, and a class oracle over fixed points.

A bridge from x to x' is a point that follows x up to coordinate m and x'
from coordinate n on, stays in the same fiber, and fills the gap with an
explicitly checkable middle block.  Routing certificates give bridges
constructively: when the windows of x and x' over a presented block both
reroute through one symbol, splicing the two rerouted witnesses at that
symbol yields bridges in both directions.

The class oracle counts, for a fixed codomain symbol z, the mutual-
reachability classes of periodic preimages of z^oo: cyclic strongly
connected pieces of the preimage subgraph, with plain reachability giving
the one-way transition preorder between them.
"""
from __future__ import annotations

from dataclasses import dataclass

from .codes import CodeTriple, OneBlockCode, apply_to_block, apply_to_point
from .core import Block, PeriodicPoint, iter_bits
from .depth import _Reach, RoutingCertificate
from .errors import (
    ImageMismatch,
    InvariantViolation,
    NoFixedPoint,
    NotRoutable,
    PreconditionUnmet,
    UnknownSymbol,
)
from .graphs import has_cycle, reachable_from, strongly_connected_components


@dataclass(frozen=True)
class BridgeWitness:
    """Middle block gluing the left tail of one point to the right tail of
    another inside a fiber.  The middle fills the open coordinate interval
    (m, n)."""

    left: PeriodicPoint
    right: PeriodicPoint
    m: int
    n: int
    middle: Block | None  # None when n = m + 1, a direct seam
    mode: str
    provenance: str = ""

    @property
    def middle_symbols(self):
        return () if self.middle is None else self.middle.symbols


@dataclass(frozen=True)
class BridgeSearch:
    found: bool
    witness: BridgeWitness | None
    window: int
    note: str

    def __bool__(self):
        return self.found


def _bridge_code(subject, mode):
    """The code whose image condition a bridge in this mode must satisfy."""
    if isinstance(subject, CodeTriple):
        return subject.pi
    if isinstance(subject, OneBlockCode):
        if mode == "relative":
            raise PreconditionUnmet("relative bridges need a full code triple")
        return subject
    raise PreconditionUnmet(f"cannot bridge against {type(subject).__name__}")


def _u_code(subject, mode):
    """The code whose fiber the spliced windows live in."""
    if mode == "relative":
        return subject.phi
    return _bridge_code(subject, mode)


def verify_bridge(subject, b: BridgeWitness) -> bool:
    """Mechanical replay: seam pairs allowed, middle valid and inside the
    fiber of the shared image point.  Relative-mode class preservation is
    recorded provenance, not re-checked here (it concerns infinite tails)."""
    code = _bridge_code(subject, b.mode)
    shift = code.domain
    if b.n <= b.m or len(b.middle_symbols) != b.n - b.m - 1:
        return False
    image = apply_to_point(code, b.left)
    if image != apply_to_point(code, b.right):
        return False
    seam = (
        [b.left.symbol_at(b.m)] + list(b.middle_symbols) + [b.right.symbol_at(b.n)]
    )
    for a, c in zip(seam, seam[1:]):
        if not shift.allows(a, c):
            return False
    for j, s in enumerate(b.middle_symbols):
        if code.apply_symbol(s) != image.symbol_at(b.m + 1 + j):
            return False
    return True


def _window(point, start, length):
    return Block(tuple(point.symbol_at(start + k) for k in range(length)))


def _witness_through(subject, cert, u, a):
    """A fiber block with u's endpoints passing through symbol a at the
    certificate's position; prefers the recorded witness, falls back to a
    fresh reachability search."""
    recorded = cert.witness_for(u)
    if recorded is not None and recorded.at(cert.n) == a:
        return recorded
    if cert.mode == "relative":
        wit = _Reach(subject.pi, subject.psi_word(cert.w.symbols))
    else:
        wit = _Reach(_bridge_code(subject, cert.mode), cert.w.symbols)
    idx = _u_code(subject, cert.mode).domain.alphabet.index
    s, t, m = idx(u.at(1)), idx(u.at(len(u))), idx(a)
    if wit.empty or s not in wit.fs or t not in wit.bs:
        raise NotRoutable(f"{u.text()!r} has no witness through {a!r}")
    if not (wit.route(cert.n, s, t) >> m) & 1:
        raise NotRoutable(f"{u.text()!r} has no witness through {a!r}")
    path = wit.lex_path_through(s, m, t, cert.n)
    symbols = _u_code(subject, cert.mode).domain.alphabet.symbols
    return Block(tuple(symbols[i] for i in path))


def construct_bridge(subject, x, xp, occurrence, cert: RoutingCertificate, a):
    """Two-way bridges between x and x' across an occurrence of the
    certified block.

    Both points must show cert.w in their (phi-)images starting at
    `occurrence`.  Their windows are rerouted through the symbol a at the
    certificate's position and the rerouted blocks are spliced there,
    giving one bridge each way: follow x, run the spliced middle, continue
    as x'; and symmetrically.  Returns the pair (x to x', x' to x).
    """
    u_code = _u_code(subject, cert.mode)
    length = len(cert.w)
    u = _window(x, occurrence, length)
    up = _window(xp, occurrence, length)
    for point, w in ((x, u), (xp, up)):
        if apply_to_block(u_code, w) != cert.w:
            raise PreconditionUnmet(
                f"{point.text()} does not show {cert.w.text()!r} at {occurrence}"
            )
    v = _witness_through(subject, cert, u, a)
    vp = _witness_through(subject, cert, up, a)
    cut = cert.n
    mid_fwd = v.symbols[: cut - 1] + (a,) + vp.symbols[cut:]
    mid_rev = vp.symbols[: cut - 1] + (a,) + v.symbols[cut:]
    note = (
        f"spliced rerouted fiber blocks at {a!r}, position {cut} of "
        f"{cert.w.text()!r}; image class preserved by construction"
    )
    fwd = BridgeWitness(
        x, xp, occurrence - 1, occurrence + length, Block(mid_fwd), cert.mode, note
    )
    rev = BridgeWitness(
        xp, x, occurrence - 1, occurrence + length, Block(mid_rev), cert.mode, note
    )
    for b in (fwd, rev):
        if not verify_bridge(subject, b):
            raise InvariantViolation("constructed bridge failed replay")
    return fwd, rev


def bounded_bridge_exists(code, x, xp, m, window=None):
    """Search for a bridge from x to x' cut at m, with the rejoin
    coordinate n ranging over (m, m+window].

    The middle is found by stepping the fiber frontier along the image
    point's letters from x's symbol at m until it covers x's-partner
    symbol at n.  A miss only means no bridge this short exists.
    """
    if window is None:
        window = 2 * len(code.domain.alphabet)
    image = apply_to_point(code, x)
    if image != apply_to_point(code, xp):
        raise ImageMismatch(
            f"{x.text()} and {xp.text()} have different image points"
        )
    idx = code.domain.alphabet.index
    symbols = code.domain.alphabet.symbols
    start = idx(x.symbol_at(m))
    frontier = [1 << start]
    for j in range(1, window + 1):
        n = m + j
        cur = code.step(frontier[-1], image.symbol_at(n))
        if not cur:
            break
        frontier.append(cur)
        t = idx(xp.symbol_at(n))
        if (cur >> t) & 1:
            toward = [0] * (j + 1)
            toward[j] = 1 << t
            for k in range(j - 1, -1, -1):
                toward[k] = code.domain.step_mask_back(toward[k + 1]) & frontier[k]
            path = [start]
            for k in range(1, j):
                path.append(
                    next(iter_bits(code.domain.succ_masks[path[-1]] & toward[k]))
                )
            middle = (
                Block(tuple(symbols[i] for i in path[1:])) if j > 1 else None
            )
            witness = BridgeWitness(
                x, xp, m, n, middle, "absolute", "found by bounded fiber search"
            )
            if not verify_bridge(code, witness):
                raise InvariantViolation("searched bridge failed replay")
            return BridgeSearch(True, witness, window, "")
    return BridgeSearch(
        False, None, window, f"no bridge found with rejoin within {window} steps"
    )


@dataclass(frozen=True)
class ClassOracleResult:
    count: int
    representatives: tuple
    preorder: tuple
    caveat: str


def _shortest_lex_cycle(shift, comp, succ):
    """Least-length, then lexicographically least, cycle through the
    smallest symbol of the component."""
    s = comp[0]
    dist_to_s = {s: 0}
    frontier = [s]
    rev = {v: [u for u in comp if v in succ[u]] for v in comp}
    while frontier:
        nxt = []
        for v in frontier:
            for u in rev[v]:
                if u not in dist_to_s:
                    dist_to_s[u] = dist_to_s[v] + 1
                    nxt.append(u)
        frontier = nxt
    length = min(1 + dist_to_s[u] for u in succ[s] if u in dist_to_s)
    path = [s]
    for step in range(1, length):
        path.append(
            min(
                v
                for v in succ[path[-1]]
                if v in dist_to_s and dist_to_s[v] == length - step
            )
        )
    symbols = shift.alphabet.symbols
    return PeriodicPoint.make(Block(tuple(symbols[i] for i in path)), 0)


def fixed_point_class_oracle(code, z):
    """Transition classes of periodic preimages of the fixed point on z.

    Restricts the domain graph to symbols mapping to z, takes its strongly
    connected components that contain a cycle, and reports one periodic
    representative per component plus the reachability preorder between
    components.  Aperiodic preimages of z^oo are outside this census; the
    caveat field says so.
    """
    if z not in code.codomain_alphabet:
        raise UnknownSymbol(f"symbol {z!r} not in codomain alphabet")
    if code.codomain is not None and not code.codomain.allows(z, z):
        raise NoFixedPoint(f"{z!r} is not a fixed symbol of the codomain")
    shift = code.domain
    fiber = [
        i
        for i, s in enumerate(shift.alphabet.symbols)
        if code.apply_symbol(s) == z
    ]
    fiber_set = set(fiber)
    adj = {
        i: [j for j in iter_bits(shift.succ_masks[i]) if j in fiber_set]
        for i in fiber
    }
    comps = strongly_connected_components(fiber, adj)
    cyclic = sorted(
        (c for c in comps if has_cycle(c, adj)), key=lambda c: c[0]
    )
    if not cyclic:
        raise NoFixedPoint(f"no periodic preimage of {z!r} repeated forever")
    reps = tuple(_shortest_lex_cycle(shift, c, adj) for c in cyclic)
    reach = [reachable_from(c, adj) for c in cyclic]
    preorder = tuple(
        (i, j)
        for i in range(len(cyclic))
        for j in range(len(cyclic))
        if i != j and any(v in reach[i] for v in cyclic[j])
    )
    return ClassOracleResult(
        len(cyclic),
        reps,
        preorder,
        "counts transition classes among periodic preimage points only; "
        "aperiodic preimages are not examined",
    )
