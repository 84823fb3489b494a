//! Cost functionals over paths and assignments.
//!
//! Edge weights are minutes, so path costs are population-minutes. The
//! average wait is reported in hours.

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::{Assignment, Graph, Path};

/// Completion time of the node at `index` (0-based) along `path`.
pub fn latency(g: &Graph, path: &Path, index: usize) -> f64 {
    path.nodes()[..=index]
        .windows(2)
        .map(|w| g.weight(w[0], w[1]))
        .sum()
}

/// Weighted latency of a single route: sum of importance times completion time.
pub fn path_wlp(g: &Graph, path: &Path) -> f64 {
    route_cost(g, path.nodes())
}

pub(crate) fn route_cost(g: &Graph, nodes: &[usize]) -> f64 {
    let mut clock = 0.0;
    let mut cost = 0.0;
    for w in nodes.windows(2) {
        clock += g.weight(w[0], w[1]);
        cost += g.importance(w[1]) * clock;
    }
    cost
}

pub fn wlp_sum(g: &Graph, a: &Assignment) -> f64 {
    a.paths.iter().map(|p| path_wlp(g, p)).sum()
}

/// Population-weighted mean completion time, in hours.
pub fn average_wait(g: &Graph, a: &Assignment) -> Result<f64> {
    let total = g.total_importance();
    if total > 0.0 {
        return Ok(wlp_sum(g, a) / total / 60.0);
    }
    let serves_nothing = a.paths.iter().all(|p| p.len() <= 1);
    if serves_nothing {
        Ok(0.0)
    } else {
        Err(Error::DegenerateInstance)
    }
}

/// Spread between the most and least loaded crew.
pub fn latency_range(g: &Graph, a: &Assignment) -> f64 {
    let costs = a.paths.iter().map(|p| path_wlp(g, p));
    let (lo, hi) = costs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
        (lo.min(c), hi.max(c))
    });
    if a.paths.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// Latest completion time over all crews.
pub fn makespan(g: &Graph, a: &Assignment) -> f64 {
    a.paths
        .iter()
        .map(|p| route_length(g, p.nodes()))
        .fold(0.0, f64::max)
}

fn route_length(g: &Graph, nodes: &[usize]) -> f64 {
    nodes.windows(2).map(|w| g.weight(w[0], w[1])).sum()
}

/// Population still without service as a step function of time.
#[derive(Debug, Clone, PartialEq)]
pub struct RestorationCurve {
    pub points: Vec<(f64, f64)>,
}

impl RestorationCurve {
    /// Unserved population at time `t` (right-continuous step function).
    pub fn unserved_at(&self, t: f64) -> f64 {
        self.points
            .iter()
            .take_while(|(time, _)| *time <= t)
            .last()
            .map_or(self.points.first().map_or(0.0, |p| p.1), |p| p.1)
    }

    pub fn final_time(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.0)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "time_minutes,population_unserved")?;
        for (t, u) in &self.points {
            writeln!(out, "{t},{u}")?;
        }
        Ok(())
    }
}

/// Nodes finishing at the same instant collapse into one point. A node that
/// completes at time zero is folded into the initial point.
pub fn restoration_curve(g: &Graph, a: &Assignment) -> RestorationCurve {
    let mut events: Vec<(f64, f64)> = Vec::with_capacity(g.n());
    for path in &a.paths {
        let mut clock = 0.0;
        for w in path.nodes().windows(2) {
            clock += g.weight(w[0], w[1]);
            events.push((clock, g.importance(w[1])));
        }
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut unserved: f64 = events.iter().map(|e| e.1).sum();
    let mut points = vec![(0.0, unserved)];
    for (t, w) in events {
        unserved -= w;
        let last = points.last_mut().expect("curve starts with a point");
        if last.0 == t {
            last.1 = unserved;
        } else {
            points.push((t, unserved));
        }
    }
    // Clear accumulated rounding so a complete assignment ends at exactly zero.
    if let Some(last) = points.last_mut() {
        if last.1.abs() < 1e-9 * (1.0 + g.total_importance()) {
            last.1 = 0.0;
        }
    }
    RestorationCurve { points }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::reference_graph;

    fn asg(lists: &[&[usize]]) -> Assignment {
        Assignment::from_lists(lists.iter().map(|l| l.to_vec()).collect())
    }

    #[test]
    fn latency_by_summation() {
        let g = reference_graph();
        assert_eq!(latency(&g, &Path(vec![0, 1, 2]), 2), 3.0);
        assert_eq!(latency(&g, &Path(vec![0, 2, 1]), 2), 7.0);
        assert_eq!(latency(&g, &Path(vec![0, 2, 1]), 0), 0.0);
    }

    #[test]
    fn path_costs() {
        let g = reference_graph();
        assert_eq!(path_wlp(&g, &Path(vec![0, 1, 2])), 18.0);
        assert_eq!(path_wlp(&g, &Path(vec![0, 2, 1])), 41.0);
        assert_eq!(path_wlp(&g, &Path(vec![0])), 0.0);
    }

    #[test]
    fn sum_wait_and_range() {
        let g = reference_graph();
        let split = asg(&[&[0, 1], &[0, 2]]);
        let chain = asg(&[&[0, 1, 2], &[0]]);
        assert_eq!(wlp_sum(&g, &split), 23.0);
        assert_eq!(wlp_sum(&g, &chain), 18.0);
        assert!((average_wait(&g, &split).unwrap() - 23.0 / 8.0 / 60.0).abs() < 1e-15);
        assert_eq!(average_wait(&g, &chain).unwrap(), 0.0375);
        assert_eq!(latency_range(&g, &split), 17.0);
        assert_eq!(latency_range(&g, &chain), 18.0);
        assert_eq!(latency_range(&g, &asg(&[&[0, 2, 1]])), 0.0);
    }

    #[test]
    fn single_node_instance() {
        let g = Graph::new(0, vec![0.0], vec![vec![0.0]]).unwrap();
        let a = asg(&[&[0], &[0]]);
        assert_eq!(wlp_sum(&g, &a), 0.0);
        assert_eq!(average_wait(&g, &a).unwrap(), 0.0);
        assert_eq!(restoration_curve(&g, &a).points, vec![(0.0, 0.0)]);
    }

    #[test]
    fn zero_importance_with_work_is_degenerate() {
        let g = Graph::new(0, vec![0.0, 0.0], vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            average_wait(&g, &asg(&[&[0, 1]])),
            Err(Error::DegenerateInstance)
        ));
    }

    #[test]
    fn curves() {
        let g = reference_graph();
        let c = restoration_curve(&g, &asg(&[&[0, 1], &[0, 2]]));
        assert_eq!(c.points, vec![(0.0, 8.0), (1.0, 5.0), (4.0, 0.0)]);
        let c = restoration_curve(&g, &asg(&[&[0, 1, 2], &[0]]));
        assert_eq!(c.points, vec![(0.0, 8.0), (1.0, 5.0), (3.0, 0.0)]);
        assert_eq!(c.unserved_at(0.5), 8.0);
        assert_eq!(c.unserved_at(1.0), 5.0);
        assert_eq!(c.unserved_at(100.0), 0.0);
        assert_eq!(c.final_time(), 3.0);
    }

    #[test]
    fn simultaneous_completions_merge() {
        let g = Graph::new(
            0,
            vec![0.0, 2.0, 4.0],
            vec![vec![0.0, 5.0, 5.0], vec![5.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]],
        )
        .unwrap();
        let c = restoration_curve(&g, &asg(&[&[0, 1], &[0, 2]]));
        assert_eq!(c.points, vec![(0.0, 6.0), (5.0, 0.0)]);
    }

    #[test]
    fn curve_csv() {
        let g = reference_graph();
        let mut buf = Vec::new();
        restoration_curve(&g, &asg(&[&[0, 1], &[0, 2]]))
            .write_csv(&mut buf)
            .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "time_minutes,population_unserved\n0,8\n1,5\n4,0\n"
        );
    }

    #[test]
    fn makespan_is_longest_route() {
        let g = reference_graph();
        assert_eq!(makespan(&g, &asg(&[&[0, 1], &[0, 2]])), 4.0);
        assert_eq!(makespan(&g, &asg(&[&[0, 2, 1], &[0]])), 7.0);
    }
}
