"""Summary statistics of a mesh."""

from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .trimesh import TriMesh
from ..utils.serialization import csv_text, key_value_text


@dataclass(frozen=True)
class MeshStatistics:
    h: float
    min_angle: float
    node_count: int
    triangle_count: int
    edge_count: int
    triangles_per_subdomain: Dict[int, int] = field(default_factory=dict)
    area_per_subdomain: Dict[int, float] = field(default_factory=dict)
    interface_edge_count: Dict[int, int] = field(default_factory=dict)
    interface_resolution: Dict[int, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {
            "h": self.h,
            "min_angle": self.min_angle,
            "nodes": self.node_count,
            "triangles": self.triangle_count,
            "edges": self.edge_count,
        }

    def to_text(self) -> str:
        rows = [(tag, self.triangles_per_subdomain[tag], self.area_per_subdomain[tag])
                for tag in sorted(self.triangles_per_subdomain)]
        iface = [(j, self.interface_edge_count[j], self.interface_resolution[j])
                 for j in sorted(self.interface_edge_count)]
        return key_value_text(self.to_dict(), {
            "subdomains": csv_text(["tag", "triangles", "area"], rows),
            "interfaces": csv_text(["curve", "edges", "max_edge_length"], iface),
        })


def mesh_statistics(mesh: TriMesh) -> MeshStatistics:
    """Deterministic summary: h, minimum angle, per-subdomain counts and interface resolution."""
    tags = sorted(int(t) for t in np.unique(mesh.tags))
    per_tag = {t: int(np.sum(mesh.tags == t)) for t in tags}
    areas = {t: float(mesh.areas[mesh.tags == t].sum()) for t in tags}
    counts, resolution = {}, {}
    for j in mesh.curve_ids:
        e = mesh.interface_edges_of(j)
        lengths = np.linalg.norm(mesh.nodes[e[:, 1]] - mesh.nodes[e[:, 0]], axis=1)
        counts[j] = int(e.shape[0])
        resolution[j] = float(lengths.max())
    return MeshStatistics(
        h=mesh.h,
        min_angle=mesh.min_angle,
        node_count=mesh.node_count,
        triangle_count=mesh.triangle_count,
        edge_count=int(mesh.edges.shape[0]),
        triangles_per_subdomain=per_tag,
        area_per_subdomain=areas,
        interface_edge_count=counts,
        interface_resolution=resolution,
    )
