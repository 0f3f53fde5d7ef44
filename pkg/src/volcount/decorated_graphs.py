"""Edge-labeled 4-regular graphs with a two-coloring of the vertex set.

A decorated graph is a pair of vertex permutations (the a-edges and b-edges)
together with the set of colored vertices.  Schreier graphs of finite-index
subgroups are the motivating source; the extra coloring is what obstructs
common covers.

Isomorphism uses the anchored-map procedure: once an image is chosen for one
vertex, the label-respecting extension is forced, as in a deterministic
automaton.  Covering maps in the permutation encoding are color-preserving
vertex maps commuting with both permutations; local bijectivity on edge
stars is automatic.  The common-cover decision builds the fiber product and
looks for a color-consistent connected component, which is decisive: any
common decorated cover maps onto such a component, and conversely a
consistent component is itself a common decorated cover.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .free_groups import SubgroupTable, step_tables


@dataclass(frozen=True)
class DecoratedGraph:
    vertex_count: int
    perm_a: tuple[int, ...]
    perm_b: tuple[int, ...]
    colored: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "perm_a", tuple(self.perm_a))
        object.__setattr__(self, "perm_b", tuple(self.perm_b))
        object.__setattr__(self, "colored", frozenset(self.colored))
        if self.vertex_count < 1:
            raise ValueError("a graph needs at least one vertex")
        for name, perm in (("perm_a", self.perm_a), ("perm_b", self.perm_b)):
            if len(perm) != self.vertex_count or sorted(perm) != list(range(self.vertex_count)):
                raise ValueError(f"{name}={perm!r} is not a permutation of the vertices")
        if not self.colored <= set(range(self.vertex_count)):
            raise ValueError("colored vertices must be vertices")

    def steps(self):
        return step_tables(self.perm_a, self.perm_b)

    def component_of(self, start: int) -> tuple[int, ...]:
        steps = self.steps()
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for letter in range(4):
                w = steps[letter][v]
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return tuple(sorted(seen))

    def components(self) -> list[tuple[int, ...]]:
        remaining = set(range(self.vertex_count))
        out = []
        while remaining:
            comp = self.component_of(min(remaining))
            out.append(comp)
            remaining -= set(comp)
        return out

    def is_connected(self) -> bool:
        return len(self.component_of(0)) == self.vertex_count


def from_subgroup(table: SubgroupTable, colored: Iterable[int]) -> DecoratedGraph:
    """The Schreier graph of the subgroup with the given vertices colored."""
    return DecoratedGraph(table.degree, table.perm_a, table.perm_b, frozenset(colored))


def _anchored_encoding(graph: DecoratedGraph, start: int):
    # Breadth-first relabeling of start's component with letter order
    # a, a^-1, b, b^-1; the encoding determines the component up to the
    # unique label-respecting isomorphism fixing the anchor.
    steps = graph.steps()
    label = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for letter in range(4):
            w = steps[letter][v]
            if w not in label:
                label[w] = len(order)
                order.append(w)
    perm_a = tuple(label[graph.perm_a[v]] for v in order)
    perm_b = tuple(label[graph.perm_b[v]] for v in order)
    colored = tuple(sorted(label[v] for v in order if v in graph.colored))
    return (len(order), perm_a, perm_b, colored)


def is_isomorphic(g1: DecoratedGraph, g2: DecoratedGraph) -> bool:
    """Label- and color-preserving isomorphism of decorated graphs.

    Connected case: anchor vertex 0 of g1 and try each same-colored vertex of
    g2 as its image; the extension is unique, so equality of the two anchored
    encodings decides.  Disconnected graphs are compared component-by-
    component via canonical (minimal) anchored encodings.
    """
    if g1.vertex_count != g2.vertex_count:
        return False
    if g1.is_connected() and g2.is_connected():
        target = _anchored_encoding(g1, 0)
        anchor_colored = 0 in g1.colored
        for v in range(g2.vertex_count):
            if (v in g2.colored) != anchor_colored:
                continue
            if _anchored_encoding(g2, v) == target:
                return True
        return False
    certificate1 = sorted(_component_certificate(g1, comp) for comp in g1.components())
    certificate2 = sorted(_component_certificate(g2, comp) for comp in g2.components())
    return certificate1 == certificate2


def _component_certificate(graph: DecoratedGraph, component: tuple[int, ...]):
    return min(_anchored_encoding(graph, v) for v in component)


def check_cover(cover: DecoratedGraph, base: DecoratedGraph, vertex_map: Sequence[int]) -> bool:
    """Verify that vertex_map is a decorated covering of base by cover.

    Requires commuting with both permutations, color preservation in both
    directions on every fiber element, and surjectivity onto every component
    of the base.  Local bijectivity is automatic in the permutation encoding.
    """
    m = tuple(vertex_map)
    if len(m) != cover.vertex_count:
        return False
    if any(not 0 <= image < base.vertex_count for image in m):
        return False
    for x in range(cover.vertex_count):
        if m[cover.perm_a[x]] != base.perm_a[m[x]]:
            return False
        if m[cover.perm_b[x]] != base.perm_b[m[x]]:
            return False
        if (x in cover.colored) != (m[x] in base.colored):
            return False
    return len(set(m)) == base.vertex_count


@dataclass(frozen=True)
class FiberProduct:
    """Product graph (uncolored), its components, and the two projections."""

    product: DecoratedGraph
    components: tuple[tuple[int, ...], ...]
    projection1: tuple[int, ...]
    projection2: tuple[int, ...]


def fiber_product(g1: DecoratedGraph, g2: DecoratedGraph) -> FiberProduct:
    """Vertex set V1 x V2 with both permutations acting coordinatewise.

    Vertex (i, j) is encoded as i * |V2| + j.  Coloring is deferred to the
    consumer: components are colored by pulling back along a projection.
    """
    n1, n2 = g1.vertex_count, g2.vertex_count
    perm_a = tuple(g1.perm_a[i] * n2 + g2.perm_a[j] for i in range(n1) for j in range(n2))
    perm_b = tuple(g1.perm_b[i] * n2 + g2.perm_b[j] for i in range(n1) for j in range(n2))
    product = DecoratedGraph(n1 * n2, perm_a, perm_b, frozenset())
    projection1 = tuple(i for i in range(n1) for _ in range(n2))
    projection2 = tuple(j for _ in range(n1) for j in range(n2))
    return FiberProduct(product, tuple(product.components()), projection1, projection2)


@dataclass(frozen=True)
class CommonCoverDecision:
    """Outcome of the common-decorated-cover search, with a witness if found."""

    has_cover: bool
    witness: DecoratedGraph | None = None
    witness_map1: tuple[int, ...] | None = None
    witness_map2: tuple[int, ...] | None = None


def has_common_decorated_cover(g1: DecoratedGraph, g2: DecoratedGraph) -> CommonCoverDecision:
    """Decide whether two connected decorated graphs share a decorated cover.

    A component C of the fiber product is color-consistent when the two
    pullback colorings agree on C; such a C, so colored, covers both inputs.
    If no component is consistent, no common decorated cover exists: any
    common cover would admit a map to the fiber product whose image is a
    component, forcing the pullback colorings to agree there.
    """
    for g in (g1, g2):
        if not g.is_connected():
            raise ValueError("the common-cover decision takes connected graphs")
    fp = fiber_product(g1, g2)
    for component in fp.components:
        consistent = all(
            (fp.projection1[x] in g1.colored) == (fp.projection2[x] in g2.colored)
            for x in component
        )
        if not consistent:
            continue
        index = {old: new for new, old in enumerate(component)}
        perm_a = tuple(index[fp.product.perm_a[old]] for old in component)
        perm_b = tuple(index[fp.product.perm_b[old]] for old in component)
        colored = frozenset(
            index[old] for old in component if fp.projection1[old] in g1.colored
        )
        witness = DecoratedGraph(len(component), perm_a, perm_b, colored)
        map1 = tuple(fp.projection1[old] for old in component)
        map2 = tuple(fp.projection2[old] for old in component)
        if not (check_cover(witness, g1, map1) and check_cover(witness, g2, map2)):
            raise RuntimeError("fiber-product witness failed the covering check")
        return CommonCoverDecision(True, witness, map1, map2)
    return CommonCoverDecision(False)


def graph_to_text(graph: DecoratedGraph) -> str:
    """Line format: vertex count, a-row, b-row, sorted colored list; one per line."""
    lines = [
        str(graph.vertex_count),
        " ".join(str(v) for v in graph.perm_a),
        " ".join(str(v) for v in graph.perm_b),
        " ".join(str(v) for v in sorted(graph.colored)),
    ]
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> DecoratedGraph:
    lines = text.split("\n")
    if len(lines) < 4:
        raise ValueError("graph text needs four lines")
    try:
        n = int(lines[0])
        perm_a = tuple(int(v) for v in lines[1].split())
        perm_b = tuple(int(v) for v in lines[2].split())
        colored = frozenset(int(v) for v in lines[3].split())
    except ValueError:
        raise ValueError("malformed graph text")
    return DecoratedGraph(n, perm_a, perm_b, colored)
