# Copyright 2026 The groupsense Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Group interaction recognition from skeleton keypoints."""

from ._groupsense import (
    Error,
    GridSpec,
    GroupingConfig,
    InteractionGroup,
    PersonState,
    RecognitionResult,
    builtin_scenarios,
    classify_interaction,
    convex_hull,
    dbscan,
    load_costmap,
    polygon_area,
    polygon_centroid,
    rasterize_groups,
    recognize_groups,
    refine_cluster,
    run_cli,
)

__all__ = [
    "Error",
    "GridSpec",
    "GroupingConfig",
    "InteractionGroup",
    "PersonState",
    "RecognitionResult",
    "builtin_scenarios",
    "classify_interaction",
    "convex_hull",
    "dbscan",
    "load_costmap",
    "polygon_area",
    "polygon_centroid",
    "rasterize_groups",
    "recognize_groups",
    "refine_cluster",
    "run_cli",
]
