"""Reaction networks and their exact structural analysis.

A network is species + complexes (non-negative rational combinations of
species) + directed reactions between complexes.  Everything here is
exact: graph indices by direct counting, subspace ranks over rationals,
and the property battery (conservativity, positive dependence,
concordance, regularity, cut pairs, linkage-class independence) by exact
linear feasibility.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .exact import ZERO, Q, in_span, nullspace, rank, rat_str, rref, to_rat, transpose
from .lp import simplex_feasible


class NetworkError(ValueError):
    """Invalid network construction."""


class SizeLimit(RuntimeError):
    """An enumeration bound was exceeded."""


ComplexVec = tuple  # tuple of rationals over the species order


def complex_str(c: ComplexVec, species: Sequence[str]) -> str:
    parts = []
    for coeff, s in zip(c, species):
        if coeff == 0:
            continue
        parts.append(s if coeff == 1 else f"{rat_str(coeff)} {s}")
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Reaction:
    reactant: int  # complex index
    product: int
    label: str


@dataclass(frozen=True)
class ReactionNetwork:
    """Immutable network; complexes ordered by first appearance."""

    species: tuple[str, ...]
    complexes: tuple[ComplexVec, ...]
    reactions: tuple[Reaction, ...]

    def __post_init__(self):
        if len(set(self.species)) != len(self.species):
            raise NetworkError("duplicate species")
        if len(set(self.complexes)) != len(self.complexes):
            raise NetworkError("duplicate complexes")
        seen = set()
        for rx in self.reactions:
            if rx.reactant == rx.product:
                raise NetworkError(f"{rx.label}: reactant equals product")
            key = (rx.reactant, rx.product, rx.label)
            if key in seen:
                raise NetworkError(f"duplicate reaction {rx.label}")
            seen.add(key)
            for c in (rx.reactant, rx.product):
                if not 0 <= c < len(self.complexes):
                    raise NetworkError(f"{rx.label}: complex index out of range")
        used = {rx.reactant for rx in self.reactions} | {rx.product for rx in self.reactions}
        if used != set(range(len(self.complexes))):
            raise NetworkError("every complex must appear in some reaction")
        labels = [rx.label for rx in self.reactions]
        if len(set(labels)) != len(labels):
            raise NetworkError("duplicate reaction labels")

    # -- basic views ---------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.species)

    @property
    def n(self) -> int:
        return len(self.complexes)

    @property
    def r(self) -> int:
        return len(self.reactions)

    @cached_property
    def reactant_complexes(self) -> tuple[int, ...]:
        seen, order = set(), []
        for rx in self.reactions:
            if rx.reactant not in seen:
                seen.add(rx.reactant)
                order.append(rx.reactant)
        return tuple(order)

    def reaction_vector(self, rx: Reaction) -> tuple:
        y = self.complexes[rx.reactant]
        yp = self.complexes[rx.product]
        return tuple(a - b for a, b in zip(yp, y))

    @cached_property
    def stoichiometric_matrix(self) -> list:
        """N: m x r, columns are reaction vectors."""
        cols = [self.reaction_vector(rx) for rx in self.reactions]
        return [[cols[j][i] for j in range(self.r)] for i in range(self.m)]

    @cached_property
    def edges(self) -> set[tuple[int, int]]:
        return {(rx.reactant, rx.product) for rx in self.reactions}

    @cached_property
    def undirected_adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {i: set() for i in range(self.n)}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    @cached_property
    def linkage_classes(self) -> tuple[frozenset[int], ...]:
        seen, out = set(), []
        for start in range(self.n):
            if start in seen:
                continue
            comp, stack = set(), [start]
            while stack:
                v = stack.pop()
                if v in comp:
                    continue
                comp.add(v)
                stack.extend(self.undirected_adjacency[v] - comp)
            seen |= comp
            out.append(frozenset(comp))
        return tuple(out)

    @cached_property
    def strong_components(self) -> tuple[frozenset[int], ...]:
        """Tarjan SCCs of the complex digraph, in discovery order."""
        adj: dict[int, list[int]] = {i: [] for i in range(self.n)}
        for a, b in self.edges:
            adj[a].append(b)
        index, low, onstack = {}, {}, set()
        stack: list[int] = []
        sccs: list[frozenset[int]] = []
        counter = itertools.count()

        def strongconnect(v0: int) -> None:
            work = [(v0, 0)]
            while work:
                v, pi = work.pop()
                if pi == 0:
                    index[v] = low[v] = next(counter)
                    stack.append(v)
                    onstack.add(v)
                recurse = False
                for i in range(pi, len(adj[v])):
                    w = adj[v][i]
                    if w not in index:
                        work.append((v, i + 1))
                        work.append((w, 0))
                        recurse = True
                        break
                    if w in onstack:
                        low[v] = min(low[v], index[w])
                if recurse:
                    continue
                if low[v] == index[v]:
                    comp = set()
                    while True:
                        w = stack.pop()
                        onstack.discard(w)
                        comp.add(w)
                        if w == v:
                            break
                    sccs.append(frozenset(comp))
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])

        for v in range(self.n):
            if v not in index:
                strongconnect(v)
        return tuple(sccs)

    @cached_property
    def terminal_strong_components(self) -> tuple[frozenset[int], ...]:
        out = []
        for scc in self.strong_components:
            if all(b in scc for a, b in self.edges if a in scc):
                out.append(scc)
        return tuple(out)


def make_network(species: Sequence[str],
                 reactions: Iterable[tuple[Mapping[str, object], Mapping[str, object], str]],
                 ) -> ReactionNetwork:
    """Build a network from {species: coeff} reactant/product maps."""
    species = tuple(species)
    idx = {s: i for i, s in enumerate(species)}
    complexes: list[ComplexVec] = []
    cindex: dict[ComplexVec, int] = {}

    def intern(side: Mapping[str, object]) -> int:
        vec = [ZERO] * len(species)
        for name, coeff in side.items():
            if name not in idx:
                raise NetworkError(f"undeclared species {name!r}")
            vec[idx[name]] = to_rat(coeff)
        key = tuple(vec)
        if key not in cindex:
            cindex[key] = len(complexes)
            complexes.append(key)
        return cindex[key]

    rxs = []
    for reactant, product, label in reactions:
        rxs.append(Reaction(intern(reactant), intern(product), label))
    return ReactionNetwork(species, tuple(complexes), tuple(rxs))


# -- network numbers and flags ------------------------------------------


@dataclass(frozen=True)
class NetworkNumbers:
    m: int
    n: int
    n_r: int
    r: int
    r_irr: int
    l: int
    sl: int
    t: int
    s: int
    q: int
    delta: int
    delta_rho: int


def network_numbers(net: ReactionNetwork) -> NetworkNumbers:
    edges = net.edges
    r_irr = sum(1 for rx in net.reactions if (rx.product, rx.reactant) not in edges)
    s = rank(transpose(net.stoichiometric_matrix))
    reactant_mat = [list(net.complexes[c]) for c in net.reactant_complexes]
    q = rank(reactant_mat)
    l = len(net.linkage_classes)
    numbers = NetworkNumbers(
        m=net.m, n=net.n, n_r=len(net.reactant_complexes), r=net.r,
        r_irr=r_irr, l=l, sl=len(net.strong_components),
        t=len(net.terminal_strong_components), s=s, q=q,
        delta=net.n - l - s, delta_rho=len(net.reactant_complexes) - q)
    return numbers


@dataclass(frozen=True)
class StructuralFlags:
    weakly_reversible: bool
    t_minimal: bool
    point_terminal: bool
    cycle_terminal: bool


def structural_flags(net: ReactionNetwork) -> StructuralFlags:
    nums = network_numbers(net)
    return StructuralFlags(
        weakly_reversible=nums.sl == nums.l,
        t_minimal=nums.t == nums.l,
        point_terminal=nums.t == nums.n - nums.n_r,
        cycle_terminal=nums.n == nums.n_r)


# -- subspaces -----------------------------------------------------------


@dataclass(frozen=True)
class SubspaceBasis:
    ambient: int
    vectors: tuple[tuple, ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def contains(self, v: Sequence) -> bool:
        return in_span([list(b) for b in self.vectors], [to_rat(x) for x in v])

    def orthogonal_complement(self) -> "SubspaceBasis":
        basis = nullspace([list(v) for v in self.vectors], ncols=self.ambient)
        return SubspaceBasis(self.ambient, tuple(tuple(b) for b in basis))


def span_basis(vectors: Iterable[Sequence], ambient: int) -> SubspaceBasis:
    """Canonical basis (RREF rows) of the span."""
    m = [[to_rat(x) for x in v] for v in vectors]
    if not m:
        return SubspaceBasis(ambient, ())
    red, pivots = rref(m)
    rows = tuple(tuple(red[i]) for i in range(len(pivots)))
    return SubspaceBasis(ambient, rows)


def stoichiometric_subspace(net: ReactionNetwork) -> SubspaceBasis:
    return span_basis([net.reaction_vector(rx) for rx in net.reactions], net.m)


# -- property battery ----------------------------------------------------


@dataclass(frozen=True)
class Witnessed:
    holds: bool
    witness: tuple | None = None


def is_conservative(net: ReactionNetwork) -> Witnessed:
    """Positive vector in the orthogonal complement of S, if any."""
    nt = transpose(net.stoichiometric_matrix)  # rows: reaction vectors
    eqs = [(row, 0) for row in nt]
    ges = [([Q(1) if j == i else ZERO for j in range(net.m)], 1) for i in range(net.m)]
    x = simplex_feasible(net.m, eqs, ges)
    return Witnessed(x is not None, tuple(x) if x is not None else None)


def is_positively_dependent(net: ReactionNetwork) -> Witnessed:
    """k >= 1 with N k = 0, if any."""
    eqs = [(row, 0) for row in net.stoichiometric_matrix]
    ges = [([Q(1) if j == i else ZERO for j in range(net.r)], 1) for i in range(net.r)]
    k = simplex_feasible(net.r, eqs, ges)
    return Witnessed(k is not None, tuple(k) if k is not None else None)


@dataclass(frozen=True)
class ConcordanceResult:
    concordant: bool
    alpha: tuple | None = None
    sigma: tuple | None = None


def _sign_constraint_rows(n: int, pattern: Sequence[int]):
    """eq rows forcing zeros, ge rows forcing +/- at unit scale."""
    eqs, ges = [], []
    for i, s in enumerate(pattern):
        unit = [Q(1) if j == i else ZERO for j in range(n)]
        if s == 0:
            eqs.append((unit, 0))
        elif s > 0:
            ges.append((unit, 1))
        else:
            ges.append(([-u for u in unit], 1))
    return eqs, ges


def sign_pattern_in_subspace(basis: SubspaceBasis, pattern: Sequence[int]) -> tuple | None:
    """Exact vector of the subspace with the requested sign pattern."""
    ortho = nullspace([list(v) for v in basis.vectors], ncols=basis.ambient) \
        if basis.vectors else None
    # membership via the complement: v in span(B) iff C v = 0 for C = basis of B-perp
    comp = basis.orthogonal_complement()
    eqs = [(list(row), 0) for row in comp.vectors]
    seqs, sges = _sign_constraint_rows(basis.ambient, pattern)
    v = simplex_feasible(basis.ambient, eqs + seqs, sges)
    return tuple(v) if v is not None else None


def concordance(net: ReactionNetwork, enumeration_bound: int = 12) -> ConcordanceResult:
    """Shinar--Feinberg discordance witness search.

    Discordant iff some nonzero sigma in S and alpha in ker N satisfy,
    per reaction: alpha > 0 forces a positive sigma species on the
    reactant support, alpha < 0 a negative one, and alpha = 0 requires
    sigma to vanish on the support or take both signs there.
    """
    if net.m > enumeration_bound:
        raise SizeLimit(f"m = {net.m} exceeds enumeration bound {enumeration_bound}")
    S = stoichiometric_subspace(net)
    supports = [tuple(i for i, v in enumerate(net.complexes[rx.reactant]) if v != 0)
                for rx in net.reactions]
    stoich_rows = net.stoichiometric_matrix
    for pattern in itertools.product((-1, 0, 1), repeat=net.m):
        if all(p == 0 for p in pattern):
            continue
        sigma = sign_pattern_in_subspace(S, pattern)
        if sigma is None:
            continue
        # allowed sign class for alpha_r is convex given the pattern
        eqs = [(row, 0) for row in stoich_rows]
        ges = []
        ok = True
        for rxi, supp in enumerate(supports):
            has_p = any(pattern[s] > 0 for s in supp)
            has_m = any(pattern[s] < 0 for s in supp)
            unit = [Q(1) if j == rxi else ZERO for j in range(net.r)]
            if has_p and has_m:
                continue  # alpha_r unrestricted
            if has_p:
                ges.append((unit, 1))
            elif has_m:
                ges.append(([-u for u in unit], 1))
            else:
                eqs.append((unit, 0))
        if not ok:
            continue
        alpha = simplex_feasible(net.r, eqs, ges)
        if alpha is not None:
            return ConcordanceResult(False, tuple(alpha), sigma)
    return ConcordanceResult(True)


@dataclass(frozen=True)
class CutPair:
    complexes: tuple[int, int]
    side_a: frozenset[int]  # component containing complexes[0] after removal
    side_b: frozenset[int]


def cut_pairs(net: ReactionNetwork) -> list[CutPair]:
    """Adjacent complex pairs whose edge removal splits their linkage class."""
    out = []
    seen_pairs = set()
    for a, b in sorted(net.edges):
        key = (min(a, b), max(a, b))
        if key in seen_pairs:
            continue
        seen_pairs.add(key)
        lclass = next(lc for lc in net.linkage_classes if a in lc)
        adj = {v: set() for v in lclass}
        for u, w in net.edges:
            if u in lclass and {u, w} != {a, b}:
                adj[u].add(w)
                adj[w].add(u)
        comp, stack = set(), [a]
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            stack.extend(adj[v] - comp)
        if b not in comp:
            out.append(CutPair((a, b), frozenset(comp), frozenset(lclass - comp)))
    return out


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    violated: str | None = None


def is_regular(net: ReactionNetwork) -> RegularityResult:
    """Positively dependent + t-minimal + tree-like linkage classes."""
    if not is_positively_dependent(net).holds:
        return RegularityResult(False, "reaction vectors not positively dependent")
    nums = network_numbers(net)
    if nums.t != nums.l:
        return RegularityResult(False, "not t-minimal (t != l)")
    scc_of = {}
    for i, scc in enumerate(net.strong_components):
        for v in scc:
            scc_of[v] = i
    for lclass in net.linkage_classes:
        nodes = {scc_of[v] for v in lclass}
        cedges = {(min(scc_of[a], scc_of[b]), max(scc_of[a], scc_of[b]))
                  for a, b in net.edges
                  if a in lclass and scc_of[a] != scc_of[b]}
        if len(cedges) != len(nodes) - 1:
            return RegularityResult(False, "condensation of a linkage class is not a tree")
    return RegularityResult(True)


def linkage_class_independence(net: ReactionNetwork) -> bool:
    """Sum of per-linkage-class ranks equals the network rank."""
    total = 0
    for lclass in net.linkage_classes:
        vecs = [net.reaction_vector(rx) for rx in net.reactions if rx.reactant in lclass]
        total += rank([list(v) for v in vecs]) if vecs else 0
    s = rank(transpose(net.stoichiometric_matrix))
    return total == s
