import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from blisnet.errors import (
    DisconnectedGraph,
    DuplicateEdgeConflict,
    DuplicatePoints,
    KTooLarge,
    NegativeWeight,
    SelfLoop,
)
from blisnet.graphs import (
    build_graph,
    diameter,
    is_bipartite,
    knn_graph,
    load_graph_csv,
    path_distance,
    permute_graph,
    save_graph_csv,
)
from blisnet.operators import eig_sym, normalized_laplacian
from blisnet.zoo import complete_graph, cycle_graph, path_graph, random_knn_graph


def test_build_k2():
    g = build_graph([(0, 1, 1.0)], 2)
    assert g.n == 2 and g.edge_count == 1
    assert np.allclose(g.dense_adjacency(), [[0, 1], [1, 0]])


def test_build_disconnected():
    with pytest.raises(DisconnectedGraph):
        build_graph([(0, 1, 1), (2, 3, 1)], 4)


def test_build_self_loop():
    with pytest.raises(SelfLoop):
        build_graph([(1, 1, 1.0)], 2)


def test_build_nonpositive_weight():
    with pytest.raises(NegativeWeight):
        build_graph([(0, 1, -2.0)], 2)
    with pytest.raises(NegativeWeight):
        build_graph([(0, 1, 0.0)], 2)


def test_build_duplicate_edges():
    # same weight twice is tolerated, conflicting weights are not
    g = build_graph([(0, 1, 2.0), (1, 0, 2.0)], 2)
    assert g.edge_count == 1
    with pytest.raises(DuplicateEdgeConflict):
        build_graph([(0, 1, 2.0), (1, 0, 3.0)], 2)


def test_build_out_of_range():
    with pytest.raises(ValueError):
        build_graph([(0, 5, 1.0)], 2)


def test_adjacency_symmetry_exact(zoo):
    for g in zoo.values():
        dense = g.dense_adjacency()
        assert (dense == dense.T).all()
        assert (np.diag(dense) == 0).all()
        assert (dense >= 0).all()


def test_knn_collinear_points():
    g = knn_graph([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], k=1)
    dense = g.dense_adjacency()
    assert g.edge_count == 2
    assert dense[0, 1] == 1 and dense[1, 2] == 1 and dense[0, 2] == 0


def test_knn_unit_square_tiebreak():
    # each corner has two neighbors at distance 1; ties go to the lower index
    g = knn_graph([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)], k=1)
    expected = {(0, 1), (0, 2), (1, 3)}
    dense = g.dense_adjacency()
    edges = {(i, j) for i in range(4) for j in range(i + 1, 4) if dense[i, j]}
    assert edges == expected
    assert g.edge_count == 3


def test_knn_duplicate_points():
    with pytest.raises(DuplicatePoints):
        knn_graph([(0.0, 0.0), (0.0, 0.0), (1.0, 1.0)], k=1)


def test_knn_k_too_large():
    with pytest.raises(KTooLarge):
        knn_graph([(0.0, 0.0), (1.0, 1.0)], k=2)


def test_knn_100_nodes(zoo):
    g = zoo["RND100"]
    assert g.n == 100
    # frozen seed; the typical 5-NN OR-symmetrized count sits near 300
    assert g.edge_count == 302
    assert 280 <= g.edge_count <= 330


@settings(max_examples=25, deadline=None)
@given(
    pts=st.lists(
        st.tuples(
            st.floats(0, 1, allow_nan=False, width=32),
            st.floats(0, 1, allow_nan=False, width=32),
        ),
        min_size=6,
        max_size=10,
        unique=True,
    ),
    data=st.data(),
)
def test_knn_permutation_invariance(pts, data):
    # exact distance ties are broken by node index, which is label-dependent,
    # so the isomorphism property is only promised for tie-free clouds
    pts = np.asarray(pts, dtype=float)
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
    np.fill_diagonal(d2, np.inf)
    for row in d2:
        finite = np.sort(row[np.isfinite(row)])
        assume(not np.any(np.diff(finite) == 0))
    perm = np.asarray(data.draw(st.permutations(range(len(pts)))))
    try:
        g = knn_graph(pts, k=3)
        g_perm = knn_graph(pts[perm], k=3)
    except DisconnectedGraph:
        return
    expected = g.dense_adjacency()[np.ix_(perm, perm)]
    assert np.array_equal(g_perm.dense_adjacency(), expected)


def test_path_distance_examples(zoo):
    assert path_distance(zoo["K2"], 0, 1) == 1
    p5 = path_graph(5)
    assert path_distance(p5, 0, 4) == 4
    assert path_distance(zoo["C6"], 0, 3) == 3
    assert path_distance(p5, 2, 2) == 0


def test_diameter_examples(zoo):
    assert diameter(zoo["K2"]) == 1
    for n in (2, 5, 9):
        assert diameter(path_graph(n)) == n - 1
    assert diameter(complete_graph(5)) == 1


def test_diameter_bounds_path_distance(zoo, rng):
    for g in zoo.values():
        d = diameter(g)
        for _ in range(10):
            i, j = rng.integers(0, g.n, size=2)
            assert path_distance(g, int(i), int(j)) <= d


def test_is_bipartite_examples(zoo):
    ok, colors = is_bipartite(zoo["K2"])
    assert ok and colors[0] != colors[1]
    assert is_bipartite(cycle_graph(3)) == (False, None)
    ok, colors = is_bipartite(zoo["C6"])
    assert ok
    dense = zoo["C6"].dense_adjacency()
    for i in range(6):
        for j in range(6):
            if dense[i, j]:
                assert colors[i] != colors[j]


def test_bipartite_matches_spectral_criterion(zoo):
    # bipartite iff the top normalized-Laplacian eigenvalue equals 2
    for g in zoo.values():
        decomp = eig_sym(normalized_laplacian(g))
        spectral = abs(decomp.eigenvalues[-1] - 2.0) < 1e-9
        assert is_bipartite(g)[0] == spectral


def test_graph_csv_roundtrip(tmp_path, zoo):
    g = zoo["S5"]
    path = tmp_path / "graph.csv"
    save_graph_csv(g, path)
    loaded = load_graph_csv(path)
    assert loaded.n == g.n and loaded.edge_count == g.edge_count
    assert np.allclose(loaded.dense_adjacency(), g.dense_adjacency())
    # without the sidecar the node count is inferred from the max index
    path.with_suffix(".json").unlink()
    inferred = load_graph_csv(path)
    assert inferred.n == g.n


def test_graph_csv_weights_roundtrip(tmp_path):
    g = build_graph([(0, 1, 0.125), (1, 2, 3.5)], 3)
    path = tmp_path / "weighted.csv"
    save_graph_csv(g, path)
    assert np.array_equal(load_graph_csv(path).dense_adjacency(), g.dense_adjacency())


def test_permute_graph(zoo, rng):
    g = zoo["P20"]
    perm = rng.permutation(g.n)
    gp = permute_graph(g, perm)
    assert gp.edge_count == g.edge_count
    assert np.array_equal(
        gp.dense_adjacency(), g.dense_adjacency()[np.ix_(perm, perm)]
    )


def test_sparse_storage_above_cutover():
    n = 2100
    g = path_graph(n)
    assert not g.is_dense
    assert g.edge_count == n - 1
    assert path_distance(g, 0, n - 1) == n - 1
    assert is_bipartite(g)[0]


def test_degree_data(zoo):
    g = zoo["S5"]
    d = g.degrees
    assert d[0] == 5 and (d[1:] == 1).all()
    half = g.degree_data.power(-0.5)
    assert np.allclose(half, d**-0.5)
    assert g.degree_data.power(-0.5) is half  # cached


def test_random_knn_graph_connected():
    g = random_knn_graph(n=50, k=5, seed=3)
    assert g.n == 50
    assert diameter(g) >= 1
