"""Assembly of closed-manifold descriptors from decorated graphs.

A parcel is a matched set of six building blocks, one per kind:

    V1, V0     vertex blocks with 4 boundary slots (colored / plain vertices)
    A-, A+     the ordered pair of edge blocks for a-edges, 2 slots each
    B-, B+     the ordered pair for b-edges

All six carry quadratic forms from one family whose restrictions to the
x_1 = 0 hyperplane coincide, and the parcel records a pairwise
non-commensurability certificate for every pair of distinct blocks.

Assembling a connected decorated graph with k vertices instantiates one
vertex block per vertex (V1 when colored) and one minus/plus block pair per
edge, for 5k block instances, then glues boundary slots in a fixed scan
order: each vertex exposes (a-out, a-in, b-out, b-in), each edge runs
source -> minus -> plus -> target.  The result is a closed descriptor: every
slot is glued exactly once.  Tracing a word through a descriptor crosses
three block boundaries per letter, and the kind of the terminal vertex block
(V1 against V0) is the observable that separates descriptors.

count_lower_bound turns a volume budget v into k = floor(v / (5 * V)) with V
the largest block volume, reports the number of index-k subgroups, and
checks it against the ceil(k^(k/2)) growth floor.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt

from .decorated_graphs import (
    DecoratedGraph,
    from_subgroup,
    graph_from_text,
    graph_to_text,
    is_isomorphic,
)
from .form_families import (
    NonCommensurabilityCertificate,
    QuadraticForm,
    make_q,
    make_r,
    noncommensurability_certificate,
    restrict_to_hyperplane,
    search_primes_anisotropic,
    search_primes_isotropic,
)
from .free_groups import Word, enumerate_subgroups, hall_count

VERTEX_KINDS = ("V0", "V1")
EDGE_KINDS = ("A_minus", "A_plus", "B_minus", "B_plus")
BLOCK_KINDS = VERTEX_KINDS + EDGE_KINDS


def slots_for_kind(kind: str) -> int:
    if kind in VERTEX_KINDS:
        return 4
    if kind in EDGE_KINDS:
        return 2
    raise ValueError(f"unknown block kind {kind!r}")


@dataclass(frozen=True)
class BuildingBlock:
    """One block kind of a parcel: its form reference, volume, and compactness."""

    kind: str
    volume: Fraction
    form_id: str
    compact: bool

    def __post_init__(self):
        object.__setattr__(self, "volume", Fraction(self.volume))
        if self.kind not in BLOCK_KINDS:
            raise ValueError(f"unknown block kind {self.kind!r}")
        if self.volume <= 0:
            raise ValueError("block volumes must be positive")

    @property
    def boundary_slots(self) -> int:
        return slots_for_kind(self.kind)


@dataclass(frozen=True)
class Parcel:
    """Six blocks (one per kind), their pairwise certificates, and shared data.

    certificates[i][j] holds the non-commensurability certificate between the
    forms of blocks i and j (indices in BLOCK_KINDS order), None on the
    diagonal.  boundary_form is the common restriction of all six forms; its
    equality across the parcel is what licenses mixed gluings.  The
    construction of the block spaces themselves (choosing torsion-free
    finite-level subgroups) is assumed, not computed, and flagged.
    """

    parcel_id: str
    dimension: int
    blocks: tuple[BuildingBlock, ...]
    certificates: tuple
    boundary_form: QuadraticForm
    torsion_free_assumed: bool = True

    def __post_init__(self):
        if len(self.blocks) != 6:
            raise ValueError("a parcel needs exactly six blocks")
        kinds = tuple(block.kind for block in self.blocks)
        if kinds != BLOCK_KINDS:
            raise ValueError(f"blocks must come in kind order {BLOCK_KINDS}, got {kinds}")
        if len({block.compact for block in self.blocks}) != 1:
            raise ValueError("all blocks of a parcel must agree on compactness")
        for i in range(6):
            for j in range(6):
                entry = self.certificates[i][j]
                if i == j and entry is not None:
                    raise ValueError("diagonal certificate entries must be None")
                if i != j and not isinstance(entry, NonCommensurabilityCertificate):
                    raise ValueError(
                        f"missing certificate between blocks {i} and {j}"
                    )

    @property
    def max_volume(self) -> Fraction:
        return max(block.volume for block in self.blocks)

    @property
    def compact(self) -> bool:
        return self.blocks[0].compact

    def block_of_kind(self, kind: str) -> BuildingBlock:
        return self.blocks[BLOCK_KINDS.index(kind)]


def default_parcel(n: int, compact: bool) -> Parcel:
    """Parcel of six certified blocks in dimension n.

    Non-compact: the isotropic family over Q at the first six primes
    p = 5 (mod 8).  Compact: the anisotropic family over Q(sqrt(2)) at the
    first six primes p = 1 (mod 8) with 2 not a fourth power.  Either way
    the six restrictions to x_1 = 0 agree, every pair gets a certificate,
    and all volumes default to 1.
    """
    if compact:
        primes = [report.prime for report in search_primes_anisotropic(6)]
        forms = [make_r(p, n) for p in primes]
        tag = "anisotropic"
    else:
        primes = [report.prime for report in search_primes_isotropic(6)]
        forms = [make_q(p, n) for p in primes]
        tag = "isotropic"
    boundary = restrict_to_hyperplane(forms[0])
    for form in forms[1:]:
        if restrict_to_hyperplane(form) != boundary:
            raise RuntimeError("family members stopped sharing their boundary form")
    certificates = tuple(
        tuple(
            None if i == j else _required_certificate(forms[i], forms[j])
            for j in range(6)
        )
        for i in range(6)
    )
    family = "r" if compact else "q"
    blocks = tuple(
        BuildingBlock(kind, Fraction(1), f"{family}_{primes[i]}", compact)
        for i, kind in enumerate(BLOCK_KINDS)
    )
    return Parcel(f"{tag}-n{n}", n, blocks, certificates, boundary)


def _required_certificate(f1: QuadraticForm, f2: QuadraticForm):
    certificate = noncommensurability_certificate(f1, f2)
    if certificate is None:
        raise RuntimeError("parcel construction requires certified block pairs")
    return certificate


def with_block_volumes(parcel: Parcel, volumes) -> Parcel:
    """Copy of the parcel with the six block volumes replaced."""
    volumes = tuple(Fraction(v) for v in volumes)
    if len(volumes) != 6:
        raise ValueError("expected six volumes")
    blocks = tuple(
        BuildingBlock(block.kind, volume, block.form_id, block.compact)
        for block, volume in zip(parcel.blocks, volumes)
    )
    return Parcel(
        parcel.parcel_id,
        parcel.dimension,
        blocks,
        parcel.certificates,
        parcel.boundary_form,
        parcel.torsion_free_assumed,
    )


@dataclass(frozen=True)
class BlockInstance:
    instance_id: str
    kind: str
    serves: str  # the graph element this instance realizes


SlotRef = tuple[str, int]
Gluing = tuple[SlotRef, SlotRef]


@dataclass(frozen=True)
class ManifoldDescriptor:
    """A closed gluing pattern of block instances over a decorated graph."""

    source_graph: DecoratedGraph
    parcel_id: str
    instances: tuple[BlockInstance, ...]
    gluings: tuple[Gluing, ...]
    volume_bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, "volume_bound", Fraction(self.volume_bound))
        expected: dict[str, int] = {}
        for instance in self.instances:
            if instance.instance_id in expected:
                raise ValueError(f"duplicate instance id {instance.instance_id}")
            expected[instance.instance_id] = slots_for_kind(instance.kind)
        seen: set[SlotRef] = set()
        for end1, end2 in self.gluings:
            for instance_id, slot in (end1, end2):
                if instance_id not in expected:
                    raise ValueError(f"gluing references unknown instance {instance_id}")
                if not 0 <= slot < expected[instance_id]:
                    raise ValueError(f"slot {slot} out of range for {instance_id}")
                ref = (instance_id, slot)
                if ref in seen:
                    raise ValueError(f"slot {ref} glued more than once")
                seen.add(ref)
        total_slots = sum(expected.values())
        if len(seen) != total_slots:
            raise ValueError(
                f"descriptor is not closed: {total_slots - len(seen)} slots unglued"
            )

    def instance_kind(self, instance_id: str) -> str:
        for instance in self.instances:
            if instance.instance_id == instance_id:
                return instance.kind
        raise KeyError(instance_id)


def _vertex_kind(graph: DecoratedGraph, vertex: int) -> str:
    return "V1" if vertex in graph.colored else "V0"


def assemble(graph: DecoratedGraph, parcel: Parcel) -> ManifoldDescriptor:
    """Instantiate and glue parcel blocks along a connected decorated graph.

    Instances: vertex v -> "v{v}" of kind V1/V0; the a-edge leaving v ->
    "a{v}-" and "a{v}+" (likewise b).  Gluings per vertex follow the slot
    scan order (a-out, a-in, b-out, b-in), then each edge's minus block is
    glued to its plus block.  An x-self-loop at v consumes both x-slots of v.
    """
    if not graph.is_connected():
        raise ValueError("assembly requires a connected graph")
    k = graph.vertex_count
    instances = [
        BlockInstance(f"v{v}", _vertex_kind(graph, v), f"vertex {v}")
        for v in range(k)
    ]
    for letter, perm in (("a", graph.perm_a), ("b", graph.perm_b)):
        kind = "A" if letter == "a" else "B"
        for v in range(k):
            serves = f"{letter}-edge {v}->{perm[v]}"
            instances.append(BlockInstance(f"{letter}{v}-", f"{kind}_minus", serves))
            instances.append(BlockInstance(f"{letter}{v}+", f"{kind}_plus", serves))

    inverse_a = [0] * k
    inverse_b = [0] * k
    for v in range(k):
        inverse_a[graph.perm_a[v]] = v
        inverse_b[graph.perm_b[v]] = v

    gluings: list[Gluing] = []
    for v in range(k):
        # Slot scan order: a-out, a-in, b-out, b-in.
        gluings.append(((f"v{v}", 0), (f"a{v}-", 0)))
        gluings.append(((f"v{v}", 1), (f"a{inverse_a[v]}+", 1)))
        gluings.append(((f"v{v}", 2), (f"b{v}-", 0)))
        gluings.append(((f"v{v}", 3), (f"b{inverse_b[v]}+", 1)))
    for letter in ("a", "b"):
        for v in range(k):
            gluings.append(((f"{letter}{v}-", 1), (f"{letter}{v}+", 0)))

    total = sum(parcel.block_of_kind(instance.kind).volume for instance in instances)
    return ManifoldDescriptor(
        source_graph=graph,
        parcel_id=parcel.parcel_id,
        instances=tuple(instances),
        gluings=tuple(gluings),
        volume_bound=total,
    )


def volume_bound(descriptor: ManifoldDescriptor, parcel: Parcel) -> Fraction:
    """Exact sum of instance volumes; asserts the 5k * max_volume cap."""
    total = Fraction(0)
    for instance in descriptor.instances:
        total += parcel.block_of_kind(instance.kind).volume
    cap = 5 * descriptor.source_graph.vertex_count * parcel.max_volume
    if total > cap:
        raise RuntimeError(f"volume {total} exceeds the cap {cap}")
    return total


@dataclass(frozen=True)
class TraceResult:
    """Block kinds visited along a word, starting at the colored vertex block."""

    kinds: tuple[str, ...]
    terminal_kind: str
    crossings: int


def trace_word(descriptor: ManifoldDescriptor, word: Word) -> TraceResult:
    """Follow a word through the assembled blocks.

    Needs exactly one colored vertex (the basepoint block, kind V1).  Each
    letter crosses three boundaries: vertex block -> minus -> plus -> vertex
    block, traversed plus-first when the letter is an inverse.  The terminal
    vertex kind records whether the word closed up at the colored vertex.
    """
    graph = descriptor.source_graph
    colored = sorted(graph.colored)
    if len(colored) != 1:
        raise ValueError("tracing requires exactly one colored vertex")
    steps = graph.steps()
    v = colored[0]
    kinds = [_vertex_kind(graph, v)]
    for letter in word.letters:
        block = "A" if letter < 2 else "B"
        if letter % 2 == 0:  # forward letter: minus side first
            kinds.extend((f"{block}_minus", f"{block}_plus"))
        else:  # inverse letter: enter through the plus side
            kinds.extend((f"{block}_plus", f"{block}_minus"))
        v = steps[letter][v]
        kinds.append(_vertex_kind(graph, v))
    return TraceResult(tuple(kinds), kinds[-1], len(kinds) - 1)


@dataclass(frozen=True)
class CountReport:
    """Volume-budget counting report: block count, descriptors, growth floor."""

    volume_budget: Fraction
    max_block_volume: Fraction
    k: int
    descriptor_count: int
    floor_bound: int


def count_lower_bound(v, parcel: Parcel) -> CountReport:
    """Descriptors affordable within volume v: k = floor(v / (5 V)) vertices.

    Reports the exact index-k subgroup count and the growth floor
    ceil(k^(k/2)), verified to be dominated by the count.
    """
    v = Fraction(v)
    unit = 5 * parcel.max_volume
    if v < unit:
        raise ValueError(f"volume budget {v} is below the one-block scale {unit}")
    k = floor(v / unit)
    count = hall_count(k)
    power = k**k
    root = isqrt(power)
    bound = root if root * root == power else root + 1
    if count < bound:
        raise RuntimeError(f"subgroup count {count} fell below the floor {bound}")
    return CountReport(v, parcel.max_volume, k, count, bound)


def descriptors_for_index(k: int, parcel: Parcel):
    """Yield the descriptor of every index-k subgroup graph, basepoint colored.

    Enumeration order is the canonical subgroup scan order, so repeated runs
    yield an identical sequence.
    """
    for table in enumerate_subgroups(k):
        graph = from_subgroup(table, frozenset({table.basepoint}))
        yield assemble(graph, parcel)


def emit_descriptors(k: int, parcel: Parcel, directory) -> int:
    """Write every index-k descriptor under directory; returns the file count.

    Files are named descriptor_00000.json .. in enumeration order.
    """
    os.makedirs(directory, exist_ok=True)
    count = 0
    for index, descriptor in enumerate(descriptors_for_index(k, parcel)):
        path = os.path.join(directory, f"descriptor_{index:05d}.json")
        with open(path, "w", encoding="ascii") as handle:
            handle.write(descriptor_to_json(descriptor))
        count += 1
    return count


@dataclass(frozen=True)
class CommensurabilityVerdict:
    """Descriptor-level verdict with the hypotheses that back it.

    The verdict equals decorated-graph isomorphism of the source graphs.
    checked lists hypotheses verified here; assumed lists geometric inputs
    taken on trust (block spaces glue along their shared boundary type, and
    torsion-free levels exist).
    """

    commensurable: bool
    checked: tuple[str, ...]
    assumed: tuple[str, ...]


def commensurability_verdict(
    d1: ManifoldDescriptor, d2: ManifoldDescriptor, parcel: Parcel
) -> CommensurabilityVerdict:
    checked = ["parcel certificates complete"]
    if d1.parcel_id != parcel.parcel_id or d2.parcel_id != parcel.parcel_id:
        raise ValueError("descriptors must come from the given parcel")
    same = is_isomorphic(d1.source_graph, d2.source_graph)
    checked.append("source graphs compared up to decorated isomorphism")
    assumed = (
        "blocks glue along the shared boundary form",
        "torsion-free finite levels chosen for all blocks",
    )
    return CommensurabilityVerdict(same, tuple(checked), assumed)


def descriptor_to_json(descriptor: ManifoldDescriptor) -> str:
    """Stable JSON document for a descriptor; keys sorted, volumes exact."""
    graph = descriptor.source_graph
    document = {
        "graph": {
            "vertices": graph.vertex_count,
            "perm_a": list(graph.perm_a),
            "perm_b": list(graph.perm_b),
            "colored": sorted(graph.colored),
        },
        "parcel_id": descriptor.parcel_id,
        "instances": [
            [instance.instance_id, instance.kind, instance.serves]
            for instance in descriptor.instances
        ],
        "gluings": [
            [[end1[0], end1[1]], [end2[0], end2[1]]]
            for end1, end2 in descriptor.gluings
        ],
        "volume_bound": str(descriptor.volume_bound),
    }
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def descriptor_from_json(text: str) -> ManifoldDescriptor:
    document = json.loads(text)
    graph = DecoratedGraph(
        document["graph"]["vertices"],
        tuple(document["graph"]["perm_a"]),
        tuple(document["graph"]["perm_b"]),
        frozenset(document["graph"]["colored"]),
    )
    instances = tuple(
        BlockInstance(instance_id, kind, serves)
        for instance_id, kind, serves in document["instances"]
    )
    gluings = tuple(
        ((end1[0], end1[1]), (end2[0], end2[1])) for end1, end2 in document["gluings"]
    )
    return ManifoldDescriptor(
        source_graph=graph,
        parcel_id=document["parcel_id"],
        instances=instances,
        gluings=gluings,
        volume_bound=Fraction(document["volume_bound"]),
    )


__all__ = [
    "BLOCK_KINDS",
    "BlockInstance",
    "BuildingBlock",
    "CommensurabilityVerdict",
    "CountReport",
    "ManifoldDescriptor",
    "Parcel",
    "TraceResult",
    "assemble",
    "commensurability_verdict",
    "count_lower_bound",
    "default_parcel",
    "descriptor_from_json",
    "descriptor_to_json",
    "descriptors_for_index",
    "emit_descriptors",
    "graph_from_text",
    "graph_to_text",
    "trace_word",
    "volume_bound",
    "with_block_volumes",
]
