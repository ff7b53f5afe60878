import pytest

from frtbialg.base import DegreeMap
from frtbialg.quiver import Path, Quiver, build_sigma_quiver


def _deg(n_lam, n_x):
    lams = [str(i) for i in range(n_lam)]
    xs = [f"x{j}" for j in range(n_x)]
    return DegreeMap.from_labels(lams, xs, {x: [lams[(i + j) % n_lam] for i in range(n_lam)] for j, x in enumerate(xs)})


@pytest.mark.parametrize("n_lam,n_x", [(2, 2), (3, 2), (1, 3)])
@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_sigma_quiver_path_counts(n_lam, n_x, m):
    q = build_sigma_quiver(_deg(n_lam, n_x))
    assert len(q.paths(m)) == n_lam * n_x ** m


def test_paths_are_composable_and_sorted():
    q = build_sigma_quiver(_deg(2, 2))
    ps = q.paths(2)
    assert all(q.is_path(p) for p in ps)
    assert ps == sorted(ps, key=lambda p: [q.arrow_ids[a] for a in p.arrows])


def test_concat_and_labels():
    q = Quiver.from_labels(["u", "v"], [("a", "u", "v"), ("b", "v", "u")])
    p = q.concat(Path(0, (0,)), Path(1, (1,)))
    assert p == Path(0, (0, 1)) and q.label(p) == "a/b"
    assert q.concat(Path(0, (0,)), Path(0, (0,))) is None


def test_empty_quiver_has_no_arrows():
    q = Quiver.from_labels(["u"], [])
    assert q.paths(1) == [] and len(q.paths(0)) == 1


def test_bad_arrow_endpoint():
    with pytest.raises(ValueError):
        Quiver.from_labels(["u"], [("a", "u", "w")])
