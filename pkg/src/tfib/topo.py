"""Topological bookkeeping of semi-stable compactifications.

Singular-fibre catalog with Euler contributions, Euler characteristics of
compactified total spaces from signed discriminant graphs, validation of
monodromy assignments against the standard generators, and the sign of a
vertex from the dimension of its triple's common fixed subspace.

Euler counting follows fibrewise additivity: torus fibres contribute 0,
nodal fibres +1 (n = 2), positive/negative vertices +1/-1 (n = 3).
A localized thickening replaces a negative fibre by alternative-negative
codimension-1 fibres without changing the total space, so each thickened
vertex is still counted as -1 in aggregate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import zlat
from .polybase import DiscriminantGraph
from .zlat import IntMatrix


@dataclass(frozen=True)
class FibreType:
    name: str
    euler: int
    chern_c1: Optional[int] = None


FIBRE_TYPES: Dict[str, FibreType] = {
    "regular": FibreType("regular", 0),
    "nodal_I1": FibreType("nodal_I1", 1, 1),
    "generic_I1xS1": FibreType("generic_I1xS1", 0, 1),
    "positive": FibreType("positive", 1, 1),
    "negative": FibreType("negative", -1, 1),
    "alt_negative_codim1": FibreType("alt_negative_codim1", -1, 1),
}


def euler_characteristic(graph: DiscriminantGraph, dimension: int) -> int:
    """Euler characteristic of the compactified total space.

    n = 2: one nodal fibre per node.  n = 3: (#positive) - (#negative);
    thickened negative vertices keep their aggregate -1.
    """
    if dimension == 2:
        return sum(1 for v in graph.vertices if v.valence == 0)
    if dimension != 3:
        raise ValueError("dimension must be 2 or 3")
    if any(v.sign == "unsigned" for v in graph.vertices if v.valence == 3):
        raise ValueError("unsigned trivalent vertices present; classify signs first")
    return graph.count_sign("positive") - graph.count_sign("negative")


def sign_from_triple(triple: Sequence[IntMatrix]) -> str:
    """"negative" or "positive" from the common fixed-subspace dimension.

    Requires a unipotent triple with product identity and rank(T - I) = 1
    for each member; the fixed space has dimension 1 (negative vertex) or
    2 (positive vertex).
    """
    if len(triple) != 3:
        raise ValueError("expected a triple of matrices")
    n = len(triple[0])
    prod = zlat.mat_mul(zlat.mat_mul(triple[0], triple[1]), triple[2])
    if prod != zlat.identity(n):
        raise ValueError("triple product is not the identity")
    for m in triple:
        if not zlat.is_unipotent(m):
            raise ValueError("triple member is not unipotent")
        if zlat.rank(zlat.mat_sub(m, zlat.identity(n))) != 1:
            raise ValueError("degenerate triple: rank(T - I) != 1")
    d = zlat.fixed_space_dimension(list(triple))
    if d == 1:
        return "negative"
    if d == 2:
        return "positive"
    raise ValueError(f"unexpected common fixed-space dimension {d}")


# ----------------------------------------------------------------------
# monodromy assignments and their validation
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class MonodromyAssignment:
    """Per-edge generator plus per-vertex ordered triples.

    ``vertex_triples[v]`` is (edge ids in loop order, matrix triple); the
    loop convention is g1 g2 g3 = 1, so each triple multiplies to the
    identity.  The matrix attached to an edge is expressed in the fibre
    basis near its vertices, so consistency with a vertex triple entry is
    conjugacy, not literal equality.
    """

    edge_matrices: Tuple[IntMatrix, ...]
    vertex_triples: Dict[int, Tuple[Tuple[int, int, int],
                                    Tuple[IntMatrix, IntMatrix, IntMatrix]]]


def canonical_assignment(graph: DiscriminantGraph) -> MonodromyAssignment:
    """The standard generators: (eq-neg triple) at negative vertices, its
    inverse transposes at positive ones, and per edge the entry of its
    lowest-index signed vertex."""
    edge_mats: List[Optional[IntMatrix]] = [None] * len(graph.edges)
    triples = {}
    for i, v in enumerate(graph.vertices):
        if v.sign not in ("positive", "negative"):
            continue
        incident = tuple(
            sorted(j for j, e in enumerate(graph.edges) if i in (e.a, e.b))
        )
        if len(incident) != 3:
            raise ValueError(f"signed vertex {i} is not trivalent")
        mats = zlat.NEGATIVE_TRIPLE if v.sign == "negative" else zlat.POSITIVE_TRIPLE
        triples[i] = (incident, mats)
        for slot, j in enumerate(incident):
            if edge_mats[j] is None:
                edge_mats[j] = mats[slot]
    for j, m in enumerate(edge_mats):
        if m is None:
            edge_mats[j] = zlat.T_GENERIC
    return MonodromyAssignment(tuple(edge_mats), triples)


@dataclass
class ValidationItem:
    element: str
    valid: bool
    detail: str
    conjugator: Optional[IntMatrix] = None


@dataclass
class ValidationReport:
    items: List[ValidationItem]

    @property
    def valid(self) -> bool:
        return all(item.valid for item in self.items)

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "items": [
                {
                    "element": it.element,
                    "valid": it.valid,
                    "detail": it.detail,
                    "conjugator": zlat.matrix_to_json(it.conjugator)
                    if it.conjugator is not None else None,
                }
                for it in self.items
            ],
        }


def validate_semistable(
    graph: DiscriminantGraph,
    assignment: MonodromyAssignment,
    bound: int = 3,
) -> ValidationReport:
    """Check an assignment against the semi-stable hypotheses.

    Every edge matrix must be GL(3,Z)-conjugate to the generic generator;
    every vertex triple must multiply to the identity and be simultaneously
    conjugate to the triple matching its sign; each edge must be conjugate
    to the corresponding entry of its incident vertex triples.
    """
    items: List[ValidationItem] = []
    if len(assignment.edge_matrices) != len(graph.edges):
        raise ValueError("assignment does not cover all edges")
    for j, m in enumerate(assignment.edge_matrices):
        conj = zlat.conjugator(m, zlat.T_GENERIC, bound=bound)
        items.append(ValidationItem(
            f"edge {j}", conj is not None,
            "conjugate to generic generator" if conj is not None
            else "not conjugate to the generic generator",
            conj,
        ))
    for i, v in enumerate(graph.vertices):
        if v.sign not in ("positive", "negative"):
            continue
        if i not in assignment.vertex_triples:
            raise ValueError(f"assignment missing vertex {i}")
        edge_ids, mats = assignment.vertex_triples[i]
        prod = zlat.mat_mul(zlat.mat_mul(mats[0], mats[1]), mats[2])
        if prod != zlat.identity(len(mats[0])):
            items.append(ValidationItem(
                f"vertex {i}", False, "triple product is not the identity"))
            continue
        target = zlat.NEGATIVE_TRIPLE if v.sign == "negative" else zlat.POSITIVE_TRIPLE
        conj = zlat.simultaneous_conjugator(list(mats), list(target), bound=bound)
        items.append(ValidationItem(
            f"vertex {i}", conj is not None,
            f"simultaneously conjugate to the {v.sign} triple" if conj is not None
            else f"not simultaneously conjugate to the {v.sign} triple",
            conj,
        ))
        for slot, j in enumerate(edge_ids):
            edge_conj = zlat.conjugator(
                assignment.edge_matrices[j], mats[slot], bound=bound
            )
            items.append(ValidationItem(
                f"vertex {i} / edge {j}", edge_conj is not None,
                "edge generator matches the vertex loop generator"
                if edge_conj is not None
                else "edge generator inconsistent with the vertex triple",
                edge_conj,
            ))
    return ValidationReport(items)
