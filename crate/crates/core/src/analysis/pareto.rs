use serde::{Deserialize, Serialize};

/// One system's mean position on the style (x) and meaning (y) axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemPoint {
    pub system: String,
    pub x: f64,
    pub y: f64,
    pub n_cases: usize,
}

impl SystemPoint {
    pub fn new(system: impl Into<String>, x: f64, y: f64, n_cases: usize) -> Self {
        SystemPoint {
            system: system.into(),
            x,
            y,
            n_cases,
        }
    }

    /// At least as good on both axes and strictly better on one.
    pub fn dominates(&self, other: &SystemPoint) -> bool {
        self.x >= other.x && self.y >= other.y && (self.x > other.x || self.y > other.y)
    }
}

/// Indices of the non-dominated points, ordered by x then y then index.
/// Points with identical coordinates never dominate each other, so all of
/// them are kept.
pub fn frontier_indices(points: &[SystemPoint]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    // x descending, y descending: a point is dominated iff some earlier
    // point has a strictly larger y, or an equal y with a larger x
    order.sort_by(|&a, &b| {
        let (p, q) = (&points[a], &points[b]);
        q.x.total_cmp(&p.x).then(q.y.total_cmp(&p.y)).then(a.cmp(&b))
    });
    let mut keep = Vec::new();
    let mut best: Option<(f64, f64)> = None;
    for i in order {
        let p = &points[i];
        let dominated = match best {
            None => false,
            Some((bx, by)) => by > p.y || (by == p.y && bx > p.x),
        };
        if !dominated {
            keep.push(i);
        }
        if best.is_none_or(|(_, by)| p.y > by) {
            best = Some((p.x, p.y));
        }
    }
    keep.sort_by(|&a, &b| {
        let (p, q) = (&points[a], &points[b]);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)).then(a.cmp(&b))
    });
    keep
}

pub fn pareto_frontier(points: &[SystemPoint]) -> Vec<SystemPoint> {
    frontier_indices(points).into_iter().map(|i| points[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(xy: &[(f64, f64)]) -> Vec<SystemPoint> {
        xy.iter().enumerate().map(|(i, &(x, y))| SystemPoint::new(format!("s{i}"), x, y, 1)).collect()
    }

    fn coords(f: &[SystemPoint]) -> Vec<(f64, f64)> {
        f.iter().map(|p| (p.x, p.y)).collect()
    }

    fn brute(points: &[SystemPoint]) -> Vec<usize> {
        let mut keep: Vec<usize> = (0..points.len())
            .filter(|&i| !points.iter().any(|q| q.dominates(&points[i])))
            .collect();
        keep.sort_by(|&a, &b| {
            let (p, q) = (&points[a], &points[b]);
            p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)).then(a.cmp(&b))
        });
        keep
    }

    #[test]
    fn hand_cases() {
        assert!(pareto_frontier(&[]).is_empty());
        assert_eq!(coords(&pareto_frontier(&pts(&[(0.2, 0.7)]))), vec![(0.2, 0.7)]);
        let three = pts(&[(1.0, 0.0), (0.0, 1.0), (0.4, 0.4)]);
        assert_eq!(coords(&pareto_frontier(&three)), vec![(0.0, 1.0), (0.4, 0.4), (1.0, 0.0)]);
        let four = pts(&[(1.0, 0.0), (0.0, 1.0), (0.3, 0.3), (0.4, 0.4)]);
        assert_eq!(coords(&pareto_frontier(&four)), vec![(0.0, 1.0), (0.4, 0.4), (1.0, 0.0)]);
    }

    #[test]
    fn duplicates_survive_together() {
        let p = pts(&[(0.5, 0.5), (0.5, 0.5), (0.1, 0.1)]);
        assert_eq!(frontier_indices(&p), vec![0, 1]);
    }

    #[test]
    fn equal_y_smaller_x_is_dominated() {
        let p = pts(&[(0.2, 0.5), (0.6, 0.5)]);
        assert_eq!(frontier_indices(&p), vec![1]);
    }

    fn grid_points() -> impl Strategy<Value = Vec<(f64, f64)>> {
        // coarse grid so ties and duplicates are common
        prop::collection::vec((0u8..6, 0u8..6), 0..40)
            .prop_map(|v| v.into_iter().map(|(a, b)| (f64::from(a) / 5.0, f64::from(b) / 5.0)).collect())
    }

    proptest! {
        #[test]
        fn matches_quadratic_filter(xy in grid_points()) {
            let p = pts(&xy);
            prop_assert_eq!(frontier_indices(&p), brute(&p));
        }

        #[test]
        fn affine_invariance(xy in grid_points(), a in 0.1f64..10.0, b in -5.0f64..5.0, c in 0.1f64..10.0, d in -5.0f64..5.0) {
            let p = pts(&xy);
            let q: Vec<_> = p.iter().map(|s| SystemPoint::new(s.system.clone(), a * s.x + b, c * s.y + d, 1)).collect();
            let mut fp = frontier_indices(&p);
            let mut fq = frontier_indices(&q);
            fp.sort_unstable();
            fq.sort_unstable();
            prop_assert_eq!(fp, fq);
        }

        #[test]
        fn dominated_additions_change_nothing(xy in grid_points()) {
            let mut p = pts(&xy);
            let before = coords(&pareto_frontier(&p));
            if let Some(first) = p.first().cloned() {
                p.push(SystemPoint::new("worse", first.x - 1.0, first.y - 1.0, 1));
                prop_assert_eq!(coords(&pareto_frontier(&p)), before);
            }
            p.push(SystemPoint::new("best", 10.0, 10.0, 1));
            prop_assert_eq!(coords(&pareto_frontier(&p)), vec![(10.0, 10.0)]);
        }
    }
}
