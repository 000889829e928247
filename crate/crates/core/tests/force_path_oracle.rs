#[path = "support/oracle.rs"]
mod oracle;

use proptest::prelude::*;
use topobench_core::metrics::force_path::load_path_cost;
use topobench_core::metrics::ForcePathConfig;
use topobench_core::{Cell, GravityVector, Grid};

fn arb_grid() -> impl Strategy<Value = (Grid, u8)> {
    (1usize..=4, 1usize..=4)
        .prop_flat_map(|(r, c)| {
            (
                Just(r),
                Just(c),
                proptest::collection::vec(0u8..6, r * c),
                0u8..4,
            )
        })
        .prop_map(|(r, c, codes, k)| {
            let cells = codes
                .into_iter()
                .map(|v| match v {
                    0 | 1 => Cell::Value(0.0),
                    2 | 3 => Cell::Value(1.0),
                    4 => Cell::Load,
                    _ => Cell::Support,
                })
                .collect();
            (Grid::new(r, c, cells).unwrap(), k)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dijkstra_matches_exhaustive_search((grid, k) in arb_grid()) {
        let gravity = GravityVector::DOWN.rotate(k).unwrap();
        let cfg = ForcePathConfig::default();
        let solid: Vec<Vec<bool>> = (0..grid.rows())
            .map(|i| (0..grid.cols()).map(|j| !matches!(grid.get(i, j), Cell::Value(v) if v <= 0.0)).collect())
            .collect();
        let support: Vec<Vec<bool>> = (0..grid.rows())
            .map(|i| (0..grid.cols()).map(|j| grid.get(i, j) == Cell::Support).collect())
            .collect();
        for load in grid.loads() {
            let fast = load_path_cost(&grid, load, gravity, &cfg);
            let slow = oracle::min_path_cost(&solid, &support, load, (gravity.dr() as i32, gravity.dc() as i32));
            prop_assert_eq!(fast, slow, "load {:?} in\n{}", load, grid.render(topobench_core::Difficulty::Easy));
        }
    }
}
