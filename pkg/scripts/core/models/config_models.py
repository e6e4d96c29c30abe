from dataclasses import dataclass

import core.constants as cst


@dataclass
class LawCheckConfig:
    seed: int = cst.DEFAULT_SEED
    max_vertices: int = cst.MAX_HEAD_VERTICES
    max_edges: int = cst.MAX_NON_NULL_EDGES
    max_len: int = cst.DEFAULT_MAX_LEN
    value_bound: int = 20
    snake_instances: int = 50
    pullback_instances: int = 200
    transpose_instances: int = 100
    behaviour_instances: int = 50
    # behaviour checks walk every path, so their spans stay smaller than the rest
    behaviour_max_vertices: int = 3
    behaviour_max_edges: int = 3
    triangle_instances: int = 50
    triangle_max_vertices: int = 3
    triangle_max_edges: int = 3
    closed_system_instances: int = 100
    closed_system_max_vertices: int = 5
    closed_system_max_len: int = 5
