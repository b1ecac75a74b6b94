import math

import pytest

from upc_sim import (
    MetricsRow,
    Reuse,
    SimConfig,
    SweepTable,
    WeightSet,
    avg_tx_power_closed,
    cost,
    cost_table,
    metric_columns,
    select_epsilon,
    sweep_epsilon,
)


def test_cost_zero_inputs():
    assert cost(0.0, 0.0, 0.0, WeightSet(1.0, 2.0, -3.0)).j == 0.0


def test_cost_linear_combination():
    out = cost(1.2, 0.8, 0.5, WeightSet(1.0, 1.0, -1.0))
    assert out.j == pytest.approx(1.5, rel=1e-12)
    assert out.terms == (1.2, 0.8, -0.5)


def test_cost_homogeneous_in_weights():
    base = cost(1.1, 0.6, 0.4, WeightSet(1.0, 2.0, -0.5))
    doubled = cost(1.1, 0.6, 0.4, WeightSet(2.0, 4.0, -1.0))
    assert doubled.j == pytest.approx(2 * base.j, rel=1e-12)


def test_cost_j_is_exact_sum_of_terms():
    out = cost(1.37, 0.52, 0.69, WeightSet(1.7, 0.9, -1.3), epsilon=0.4)
    assert out.j == out.terms[0] + out.terms[1] + out.terms[2]
    assert out.epsilon == 0.4


def _table(rows, grid, normalization="raw"):
    return SweepTable(rows=tuple(rows), grid=tuple(grid), normalization=normalization)


def _row(eps, p, e, r):
    return MetricsRow(epsilon=eps, p_avg=p, edge_coverage=e, avg_rate_nats=r)


def test_table_shape_validation():
    with pytest.raises(ValueError):
        _table([_row(0.0, 1.0, 0.4, 1.5)], [0.0, 1.0])
    with pytest.raises(ValueError):
        _table([], [], normalization="weird")


def test_select_single_row():
    table = _table([_row(0.3, 0.7, 0.5, 1.2)], [0.3])
    eps, breakdown = select_epsilon(table, WeightSet(1.0, 1.0, -1.0))
    assert eps == 0.3
    assert breakdown.j == pytest.approx(1.2 + 0.5 - 0.7)


def test_select_empty_table():
    with pytest.raises(ValueError):
        select_epsilon(_table([], []), WeightSet(1.0, 1.0, -1.0))


def test_select_power_only_picks_largest_eps():
    # p_avg strictly decreasing in eps, so with a,b -> 0 the largest eps wins
    grid = [0.0, 0.25, 0.5, 0.75, 1.0]
    rows = [_row(e, avg_tx_power_closed(e, 3.0), 0.5, 1.0) for e in grid]
    eps, _ = select_epsilon(_table(rows, grid), WeightSet(1e-12, 1e-12, -1.0))
    assert eps == 1.0


def test_select_boundary_weight_limits():
    grid = [0.0, 0.5, 1.0]
    rows = [
        _row(0.0, 1.00, 0.30, 1.50),
        _row(0.5, 0.57, 0.50, 1.20),
        _row(1.0, 0.40, 0.62, 1.00),
    ]
    table = _table(rows, grid)
    # rate-dominant: eps with the highest rate
    assert select_epsilon(table, WeightSet(1.0, 1e-12, -1e-12))[0] == 0.0
    # edge-dominant: eps with the highest edge coverage
    assert select_epsilon(table, WeightSet(1e-12, 1.0, -1e-12))[0] == 1.0


def test_select_invariant_under_positive_scaling():
    grid = [0.0, 0.25, 0.5, 0.75, 1.0]
    rows = [
        _row(e, avg_tx_power_closed(e, 3.0), 0.3 + 0.3 * e, 1.5 - 0.5 * e * e) for e in grid
    ]
    table = _table(rows, grid, normalization="minmax")
    w = WeightSet(1.75, 1.0, -1.25)
    base, _ = select_epsilon(table, w)
    for t in (0.1, 3.0, 100.0):
        scaled = WeightSet(t * w.a, t * w.b, t * w.c)
        assert select_epsilon(table, scaled)[0] == base


def test_select_ties_break_toward_larger_eps():
    rows = [_row(0.2, 0.5, 0.5, 1.0), _row(0.8, 0.5, 0.5, 1.0)]
    table = _table(rows, [0.2, 0.8])
    assert select_epsilon(table, WeightSet(1.0, 1.0, -1.0))[0] == 0.8


def test_returned_j_recomputable_from_stored_rows():
    grid = [0.0, 0.5, 1.0]
    rows = [_row(e, 1.0 - 0.6 * e, 0.4 + 0.2 * e, 1.5 - 0.4 * e) for e in grid]
    w = WeightSet(1.2, 0.7, -0.9)
    for norm in ("raw", "minmax"):
        table = _table(rows, grid, normalization=norm)
        rate, edge, power = metric_columns(table)
        for i, breakdown in enumerate(cost_table(table, w)):
            again = cost(rate[i], edge[i], power[i], w, epsilon=grid[i])
            assert breakdown.j == again.j and breakdown.terms == again.terms
        # raw mode: straight from the row fields
        if norm == "raw":
            eps, best = select_epsilon(table, w)
            row = rows[grid.index(eps)]
            direct = cost(row.avg_rate_nats, row.edge_coverage, row.p_avg, w)
            assert best.j == direct.j


def test_minmax_columns_land_in_unit_interval():
    grid = [0.0, 0.5, 1.0]
    rows = [_row(e, 1.0 - 0.6 * e, 0.4 + 0.2 * e, 1.5 - 0.4 * e) for e in grid]
    rate, edge, power = metric_columns(_table(rows, grid, normalization="minmax"))
    for col in (rate, edge, power):
        assert min(col) == 0.0 and max(col) == 1.0


def test_minmax_constant_column_is_neutral():
    grid = [0.0, 1.0]
    rows = [_row(e, 0.5, 0.5, 0.5) for e in grid]
    rate, edge, power = metric_columns(_table(rows, grid, normalization="minmax"))
    assert rate == [0.0, 0.0] and edge == [0.0, 0.0] and power == [0.0, 0.0]


def test_sweep_endpoint_power_column():
    cfg = SimConfig().with_updates(n_trials=30_000, epsilon_grid=(0.0, 1.0))
    table = sweep_epsilon(cfg, Reuse.FR1)
    assert table.grid == (0.0, 1.0)
    assert table.rows[0].p_avg == 1.0
    closed = avg_tx_power_closed(1.0, cfg.alpha)
    assert abs(table.rows[1].p_avg - closed) <= max(3 * table.rows[1].p_avg_stderr, 1e-12)


def test_sweep_trend_columns():
    cfg = SimConfig().with_updates(n_trials=30_000, epsilon_grid=(0.0, 0.25, 0.5, 0.75, 1.0))
    table = sweep_epsilon(cfg, Reuse.FR1)
    rates = [r.avg_rate_nats for r in table.rows]
    assert all(a > b for a, b in zip(rates, rates[1:]))  # strictly decreasing
    for a, b in zip(table.rows, table.rows[1:]):
        slack = 2 * math.hypot(a.edge_coverage_stderr, b.edge_coverage_stderr)
        assert b.edge_coverage >= a.edge_coverage - slack


def test_sweep_deterministic_and_worker_independent():
    cfg = SimConfig().with_updates(n_trials=5_000, epsilon_grid=(0.0, 0.5, 1.0))
    assert sweep_epsilon(cfg, Reuse.FR3) == sweep_epsilon(cfg, Reuse.FR3, workers=4)
