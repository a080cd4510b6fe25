"""View-backing analytics: embeddings, layout, clustering, outliers, sampling."""

from .embedding import Embedding2D, PlaneProjection, embed_algorithms, project_reference_pca
from .graph import GenerationGraph, GraphEdge, GraphNode, build_generation_graph, split_label
from .layout import kamada_kawai, layout_stress
from .outliers import lof
from .view import (
    DensityGrid,
    GenerationView,
    SolutionViewModel,
    ViewConfig,
    kde_grid,
    sample_solution_view,
)

__all__ = [
    "Embedding2D",
    "PlaneProjection",
    "embed_algorithms",
    "project_reference_pca",
    "GenerationGraph",
    "GraphEdge",
    "GraphNode",
    "build_generation_graph",
    "split_label",
    "kamada_kawai",
    "layout_stress",
    "lof",
    "DensityGrid",
    "GenerationView",
    "SolutionViewModel",
    "ViewConfig",
    "kde_grid",
    "sample_solution_view",
]
