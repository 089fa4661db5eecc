"""
Mesh: interface-fitted triangulations, red refinement, statistics and text I/O.
"""

from .trimesh import TriMesh, Submesh, mesh_to_text, mesh_from_text, write_mesh, read_mesh
from .generator import generate_fitted_mesh
from .refine import refine
from .statistics import MeshStatistics, mesh_statistics

__all__ = [
    "TriMesh",
    "Submesh",
    "generate_fitted_mesh",
    "refine",
    "MeshStatistics",
    "mesh_statistics",
    "mesh_to_text",
    "mesh_from_text",
    "write_mesh",
    "read_mesh",
]
