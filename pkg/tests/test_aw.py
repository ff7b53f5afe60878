import itertools

import pytest
import sympy

from frtbialg import AwAlgebra, FaceWeight, build_w_sigma, check_face_conditions, rationals
from frtbialg.quiver import Quiver


def sympy_degree2_dim(i):
    """Independent route: degree-2 face relations written out and ranked by sympy."""
    arrows = [(lam, x) for lam in range(2) for x in range(2)]
    tgt = lambda a: (a[0] + a[1]) % 2
    paths2 = [(a, b) for a in arrows for b in arrows if tgt(a) == b[0]]

    def sig(lam, a, b):
        return (lam, (lam + a + b) % 2) if i == 1 else ((lam + 1) % 2, (lam + 1 + a + b) % 2)

    def w(top, left, right, bottom):
        (l, a), (m, c), (_, b), (_, d) = top, left, right, bottom
        return int(l == m and sig(l, b, a) == (d, c))

    cols = {pq: k for k, pq in enumerate(itertools.product(paths2, paths2))}
    rows = []
    for a, b in paths2:
        for c, d in paths2:
            r = [0] * len(cols)
            for x, y in paths2:
                r[cols[((x, y), (c, d))]] += w(x, a, y, b)
                r[cols[((a, b), (x, y))]] -= w(c, x, d, y)
            rows.append(r)
    return len(cols) - sympy.Matrix(rows).rank()


@pytest.mark.parametrize("name", ["i1", "i2"])
def test_dims_match_oracle_and_reverse_order(name, request):
    inst = request.getfixturevalue(name)
    w = build_w_sigma(inst.sigma)
    dims = AwAlgebra(w).dims(2)
    assert dims[:2] == [4, 16]
    assert dims[2] == sympy_degree2_dim(int(name[1]))
    assert AwAlgebra(w, reverse=True).dims(2) == dims


def test_factored_and_generic_routes_agree(i1):
    w = build_w_sigma(i1.sigma)
    assert AwAlgebra(w, route="generic").dims(2) == AwAlgebra(w, route="factored").dims(2)


def test_scalar_matrix_weights_use_factored_route(m2):
    w = build_w_sigma(m2.sigma)
    assert AwAlgebra(w).route == "factored"
    assert AwAlgebra(w).dims(1) == [64, 256]


def test_cap_zero_and_empty_quiver():
    q = Quiver.from_labels(["u", "v"], [])
    A = AwAlgebra(FaceWeight(q, rationals(), {}))
    assert A.dims(0) == [4]
    assert A.dims(1) == [4, 0]


def test_face_condition_violation_is_reported(i1):
    w = build_w_sigma(i1.sigma)
    (ab, cd), r = next(iter(sorted(w.entries.items())))
    # point the bottom arrow somewhere with a different target
    q = w.quiver
    other = next(a for a in range(len(q.arrow_ids))
                 if q.sources[a] == q.sources[cd[1]] and q.targets[a] != q.targets[cd[1]])
    bad = w.with_entry(ab, (cd[0], other), r)
    kinds = {v.kind for v in check_face_conditions(bad)}
    assert "face" in kinds
    with pytest.raises(ValueError):
        AwAlgebra(bad)


def test_zeta_kills_face_generators(i1):
    A = AwAlgebra(build_w_sigma(i1.sigma))
    for _, g in A.generators():
        assert not any(any(row) for row in A.zeta(g))
