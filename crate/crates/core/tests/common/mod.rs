#![allow(dead_code)]

use proptest::prelude::*;
use rigid_fraisse::metric::QMetricSpace;
use rigid_fraisse::rational::{q, Q};

/// Shortest-path metric of a complete graph with half-integer weights.
pub fn closure_metric(n: usize, weights: &[u8]) -> QMetricSpace {
    let mut d = vec![vec![q(0, 1); n]; n];
    let mut w = weights.iter();
    for i in 0..n {
        for j in i + 1..n {
            let v = q(i64::from(*w.next().expect("enough weights")), 2);
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    QMetricSpace::from_fn((0..n).collect(), |a, b| d[a][b]).expect("distinct ids")
}

/// Random metric spaces on `lo..=hi` points, distances in `{1/2, 1, ..., 4}`.
pub fn metric_space(lo: usize, hi: usize) -> impl Strategy<Value = QMetricSpace> {
    (lo..=hi).prop_flat_map(|n| {
        proptest::collection::vec(1u8..=8, n * n.saturating_sub(1) / 2).prop_map(move |w| closure_metric(n, &w))
    })
}

/// Every triple `(a, b, c)` is checked directly, independent of the library auditor.
pub fn is_metric(m: &QMetricSpace) -> bool {
    let ids = m.ids();
    ids.iter().all(|&a| {
        ids.iter().all(|&b| {
            (a == b || m.d(a, b) > Q::from_integer(0))
                && m.d(a, b) == m.d(b, a)
                && ids.iter().all(|&c| m.d(a, c) <= m.d(a, b) + m.d(b, c))
        })
    })
}
