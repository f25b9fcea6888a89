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

import pytest

import icncache

SPEC = {
    "schema_version": 1,
    "topology": {"kind": "tree", "branching": 2, "depth": 3},
    "workload": {
        "objects": 50,
        "requests": 2000,
        "popularity": {"model": "zipf", "s": 0.8},
    },
    "cache": {"capacity_fraction": 0.05},
    "strategies": [
        {"name": "lce", "placement": "lce"},
        {"name": "core", "placement": "core_only"},
    ],
    "repetitions": 3,
    "base_seed": 4,
}


def test_graph_basics():
    g = icncache.load_topology("0 1\n1 2\n1 0\n")
    assert g.node_count == 3
    assert g.edge_count == 2
    assert icncache.shortest_path(g, 0, 2) == [0, 1, 2]
    assert icncache.betweenness(g) == [0.0, 1.0, 0.0]


def test_ba_and_fit():
    g = icncache.generate_ba(100, 2, 7)
    assert g.edge_count == 197
    fit = icncache.degree_ccdf_fit(icncache.generate_ba(2000, 2, 1))
    assert fit["r_squared"] > 0.9


def test_errors_carry_codes():
    with pytest.raises(icncache.IcnError) as info:
        icncache.load_topology("0 0")
    assert info.value.code == "parse_error"
    with pytest.raises(icncache.IcnError) as info:
        icncache.rebase([0.5], 1.0)
    assert info.value.code == "degenerate_baseline"


def test_metrics_helpers():
    assert icncache.footprint_reduction(600, 1000) == pytest.approx(0.4)
    assert icncache.rebase([0.4, 0.2, 0.0], 0.2) == pytest.approx([0.25, 0.0, -0.25])
    w = icncache.catalog_weights(3, "zipf", s=1.0)
    assert w == pytest.approx([1.0, 0.5, 1.0 / 3.0])


def test_run_and_compare(tmp_path):
    out = icncache.run_experiment(SPEC, output_dir=tmp_path)
    agg = out["aggregate"]
    names = [s["name"] for s in agg["strategies"]]
    assert names == ["none", "lce", "core"]
    assert agg["strategies"][0]["metrics"]["fpr"]["mean"] == 0.0
    assert (tmp_path / "aggregate.json").exists()
    table = icncache.compare(agg)
    assert {r["metric"] for r in table["rankings"]} == set(icncache.metric_names())
    assert [row["strategy"] for row in table["bhr_fpr"]][0] in names
    assert {"bhr", "fpr", "bhr_rank", "fpr_rank"} <= set(table["bhr_fpr"][0])
    text = icncache.render_comparison(agg)
    assert text.startswith("byte hit rate and footprint reduction")
    again = icncache.run_experiment(SPEC)
    assert again["aggregate"] == agg
