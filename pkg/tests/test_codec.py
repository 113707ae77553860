import random
from itertools import combinations

import pytest

from conftest import parameter_grid, prime_for
from mbcr.codec import (
    Share,
    derive_points,
    encode,
    reconstruct,
    share_point_nodes,
    share_polys,
    shift_node,
    validate_params,
)
from mbcr.errors import CodecError, CorruptShareError, ParameterError
from mbcr.gf import Field
from mbcr.poly import eval_poly

GF7 = Field.prime(7)


def test_validate_params_fig_example():
    p = validate_params(5, 2, 3, 2, GF7)
    assert p.share_size == 7
    assert p.helper_symbols == 2
    assert p.exchange_symbols == 1
    assert p.block_size == 12
    assert p.repair_bandwidth == 7


def test_validate_params_toy():
    p = validate_params(3, 1, 1, 1, GF7)
    assert p.share_size == 2
    assert p.block_size == 2


def test_validate_params_errors():
    with pytest.raises(ParameterError, match="k = 3 > d = 2"):
        validate_params(4, 3, 2, 2, GF7)
    with pytest.raises(ParameterError, match="exceeds n"):
        validate_params(4, 2, 3, 2, GF7)
    with pytest.raises(ParameterError, match="smaller than n"):
        validate_params(11, 2, 3, 2, GF7)
    with pytest.raises(ParameterError, match="positive"):
        validate_params(5, 0, 3, 2, GF7)


def test_derive_points_canonical():
    p = validate_params(3, 1, 1, 1, GF7)
    pts = derive_points(p)
    assert pts.x == pts.y == (1, 2, 3)
    p = validate_params(5, 2, 3, 2, Field.gf256())
    pts = derive_points(p)
    assert pts.x == (1, 2, 3, 4, 5)


def test_derive_points_distinct_even_when_n_equals_field_order():
    p = validate_params(7, 2, 3, 2, GF7)
    pts = derive_points(p)
    assert len(set(pts.x)) == 7
    assert len(set(pts.y)) == 7


def test_shift_node_wraps_into_one_based_range():
    assert shift_node(3, 1, 3) == 1
    assert shift_node(1, 0, 5) == 1
    assert shift_node(5, 3, 5) == 3


def test_encode_toy_example():
    p = validate_params(3, 1, 1, 1, GF7)
    pts = derive_points(p)
    shares = encode((1, 1), p, pts)
    assert [s.evals for s in shares] == [(2, 3), (3, 4), (4, 2)]


def test_encode_zero_data():
    p = validate_params(5, 2, 3, 2, GF7)
    pts = derive_points(p)
    for s in encode((0,) * 12, p, pts):
        assert s.evals == (0,) * 7


def test_encode_length_mismatch():
    p = validate_params(3, 1, 1, 1, GF7)
    with pytest.raises(CodecError):
        encode((1, 1, 1), p, derive_points(p))


def test_first_eval_is_the_diagonal_point():
    p = validate_params(5, 2, 3, 2, GF7)
    pts = derive_points(p)
    for i in range(1, 6):
        assert share_point_nodes(i, p)[0] == (i, i)
        assert len(share_point_nodes(i, p)) == p.share_size


def test_share_polys_toy():
    p = validate_params(3, 1, 1, 1, GF7)
    pts = derive_points(p)
    shares = encode((1, 1), p, pts)
    f, g = share_polys(shares[0], p, pts)
    assert f == (1, 1)  # 1 + Y
    assert g == (2,)  # constant F(x_1, y_1)


def test_share_polys_zero_share():
    p = validate_params(5, 2, 3, 2, GF7)
    pts = derive_points(p)
    f, g = share_polys(Share(node_id=2, evals=(0,) * 7), p, pts)
    assert f == (0,) * 5 and g == (0,) * 3


def test_share_polys_round_trip_reproduces_evals():
    rng = random.Random(8)
    p = validate_params(6, 2, 3, 2, Field.prime(7))
    pts = derive_points(p)
    data = tuple(rng.randrange(7) for _ in range(p.block_size))
    for share in encode(data, p, pts):
        f, g = share_polys(share, p, pts)
        expect = [
            eval_poly(GF7, f, pts.y_of(shift_node(share.node_id, t, p.n)))
            for t in range(p.d + p.r)
        ]
        expect += [
            eval_poly(GF7, g, pts.x_of(shift_node(share.node_id, s, p.n)))
            for s in range(1, p.d)
        ]
        assert tuple(expect) == share.evals


def test_share_polys_rejects_wrong_length():
    p = validate_params(5, 2, 3, 2, GF7)
    with pytest.raises(CorruptShareError):
        share_polys(Share(node_id=1, evals=(0,) * 6), p, derive_points(p))


def test_reconstruct_toy_single_share():
    p = validate_params(3, 1, 1, 1, GF7)
    pts = derive_points(p)
    shares = encode((1, 1), p, pts)
    assert reconstruct(shares[:1], p, pts) == (1, 1)


def test_reconstruct_zero_shares():
    p = validate_params(5, 2, 3, 2, GF7)
    pts = derive_points(p)
    zeros = [Share(node_id=i, evals=(0,) * 7) for i in (2, 4)]
    assert reconstruct(zeros, p, pts) == (0,) * 12


def test_reconstruct_input_errors():
    p = validate_params(5, 2, 3, 2, GF7)
    pts = derive_points(p)
    shares = encode(tuple(i % 7 for i in range(1, 13)), p, pts)
    with pytest.raises(CodecError, match="exactly"):
        reconstruct(shares[:3], p, pts)
    with pytest.raises(CodecError, match="duplicate"):
        reconstruct([shares[0], shares[0]], p, pts)


def test_reconstruct_detects_corruption():
    p = validate_params(5, 2, 3, 2, GF7)
    pts = derive_points(p)
    shares = encode(tuple(i % 7 for i in range(1, 13)), p, pts)
    bad = Share(node_id=1, evals=shares[0].evals[:-1] + ((shares[0].evals[-1] + 1) % 7,))
    with pytest.raises(CorruptShareError):
        reconstruct([bad, shares[2]], p, pts)


def test_round_trip_random_sampled_grid():
    # 200 random blocks spread over the valid grid with n <= 7.
    rng = random.Random(9)
    grid = list(parameter_grid(7))
    for _ in range(200):
        n, k, d, r = rng.choice(grid)
        field = prime_for(n) if rng.random() < 0.5 else Field.gf256()
        p = validate_params(n, k, d, r, field)
        pts = derive_points(p)
        data = tuple(rng.randrange(field.order) for _ in range(p.block_size))
        shares = encode(data, p, pts)
        subset = rng.sample(shares, k)
        assert reconstruct(subset, p, pts) == data


def test_every_k_subset_reconstructs_small_code():
    rng = random.Random(10)
    p = validate_params(6, 3, 4, 2, prime_for(6))
    pts = derive_points(p)
    data = tuple(rng.randrange(7) for _ in range(p.block_size))
    shares = encode(data, p, pts)
    for subset in combinations(shares, p.k):
        assert reconstruct(list(subset), p, pts) == data
