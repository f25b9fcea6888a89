# Copyright 2026 The icncache Authors.
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
"""Python access to the icncache simulator and metrics."""

import json as _json
import os as _os

from ._core import (
    Graph,
    IcnError,
    betweenness,
    catalog_weights,
    degree_ccdf_fit,
    footprint_reduction,
    generate_ba,
    load_topology,
    make_tree,
    metric_names,
    pearson,
    rebase,
    shortest_path,
)

__all__ = [
    "Graph",
    "IcnError",
    "betweenness",
    "catalog_weights",
    "compare",
    "degree_ccdf_fit",
    "footprint_reduction",
    "generate_ba",
    "load_topology",
    "make_tree",
    "metric_names",
    "pearson",
    "rebase",
    "render_comparison",
    "run_experiment",
    "shortest_path",
]


def run_experiment(spec, output_dir=None, base_dir=None):
    """Run an experiment spec (dict, JSON text or path).

    Returns a dict with the aggregate report and the per-run CSV text.
    """
    if isinstance(spec, (str, _os.PathLike)) and _os.path.exists(spec):
        base_dir = base_dir or _os.path.dirname(_os.path.abspath(spec))
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    elif isinstance(spec, dict):
        text = _json.dumps(spec)
    else:
        text = str(spec)
    out = _core_run(text, base_dir or "", str(output_dir or ""))
    return _json.loads(out)


def compare(report_a, report_b=None):
    """Rank strategies per metric; accepts aggregate dicts."""
    b = "" if report_b is None else _json.dumps(report_b)
    return _json.loads(_core_compare(_json.dumps(report_a), b))


def render_comparison(report):
    return _core_render(_json.dumps(report))


from ._core import _compare as _core_compare  # noqa: E402
from ._core import _render as _core_render  # noqa: E402
from ._core import _run_experiment as _core_run  # noqa: E402
