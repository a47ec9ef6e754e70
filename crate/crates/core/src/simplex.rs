//! Projection onto the standard simplex `K = {x >= 0, sum(x) = 1}` under the
//! metric of a [`MetricMatrix`].
//!
//! The search works on faces of `K`. Starting from the full index set, the
//! query point is projected onto the affine hull of the current face. A
//! feasible projection is the answer. Otherwise the nearest point lies on the
//! relative boundary, so every hyperface (one index dropped) is solved
//! recursively from the projected point and the closest one wins. On an edge
//! the closer endpoint is returned directly.
//!
//! Sub-results are memoized per top-level call. Every point queried against
//! a face `F` during one search is an orthogonal projection of the original
//! query onto an affine hull containing `F`, so by Pythagoras the nearest
//! point of `F` does not depend on which branch reached it. The default
//! [`MemoPolicy::Face`] therefore keys the cache on the face alone, which
//! bounds the work by the number of faces. [`MemoPolicy::FaceAndPoint`]
//! additionally keys on the exact bit pattern of the query point; it rarely
//! hits across branches and makes the search grow factorially.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::face::{project_unchecked, FaceIndexSet};
use crate::metric::MetricMatrix;
use crate::weights::{WeightVector, NONNEG_TOL, SUM_TOL};

/// Per-coordinate feasibility tolerance used by the search.
pub const FEASIBILITY_TOL: f64 = NONNEG_TOL;
/// Largest dimension for which the recursive search is attempted by default.
pub const DEFAULT_MAX_DIM: usize = 24;
/// Environment variable overriding [`DEFAULT_MAX_DIM`].
pub const MAX_DIM_ENV: &str = "SIMPLEXPROJ_MAX_DIM";

/// True iff every coordinate is `>= -tol` and the sum is within
/// `max(tol, 1e-9)` of 1.
pub fn is_in_simplex(x: &[f64], tol: f64) -> bool {
    let sum: f64 = x.iter().sum();
    x.iter().all(|&v| v >= -tol) && (sum - 1.0).abs() <= tol.max(SUM_TOL)
}

/// Cache key used for sub-face results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MemoPolicy {
    #[default]
    Face,
    FaceAndPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionOptions {
    /// Reject inputs above this dimension once the recursion is needed.
    pub max_dim: usize,
    /// Evaluate the top-level hyperface sweep on the rayon pool.
    pub parallel: bool,
    pub memo: MemoPolicy,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
            parallel: false,
            memo: MemoPolicy::Face,
        }
    }
}

impl ProjectionOptions {
    /// Defaults, with `max_dim` taken from `SIMPLEXPROJ_MAX_DIM` when set to
    /// a positive integer.
    pub fn from_env() -> Self {
        let max_dim = std::env::var(MAX_DIM_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
            .unwrap_or(DEFAULT_MAX_DIM);
        Self {
            max_dim,
            ..Self::default()
        }
    }
}

/// Bookkeeping for one top-level projection.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Affine-hull projections computed.
    pub face_solves: usize,
    pub cache_hits: usize,
    pub cache_misses: usize,
    /// Deepest recursion level reached; the full simplex is level 0.
    pub max_depth: usize,
}

impl SearchStats {
    fn merge(&mut self, other: &SearchStats) {
        self.face_solves += other.face_solves;
        self.cache_hits += other.cache_hits;
        self.cache_misses += other.cache_misses;
        self.max_depth = self.max_depth.max(other.max_depth);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    /// Nearest point of the simplex.
    pub point: WeightVector,
    /// Squared distance from the query to `point`.
    pub sq_dist: f64,
    /// Coordinates of `point` above the feasibility tolerance.
    pub active_face: FaceIndexSet,
    pub stats: SearchStats,
}

#[derive(Debug, Clone)]
struct Candidate {
    point: Vec<f64>,
    /// Squared distance from the point the sub-search was started from.
    sq_dist: f64,
}

type MemoKey = (FaceIndexSet, Option<Vec<u64>>);

struct Search<'a> {
    metric: &'a MetricMatrix,
    policy: MemoPolicy,
    memo: HashMap<MemoKey, Vec<f64>>,
    stats: SearchStats,
}

impl<'a> Search<'a> {
    fn new(metric: &'a MetricMatrix, policy: MemoPolicy) -> Self {
        Self {
            metric,
            policy,
            memo: HashMap::new(),
            stats: SearchStats::default(),
        }
    }

    fn vertex(&self, k: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.metric.dim()];
        e[k] = 1.0;
        e
    }

    /// Endpoint of the edge `face` nearest to `x`; the first one on ties.
    fn closer_vertex(&self, x: &[f64], face: &FaceIndexSet) -> Vec<f64> {
        let (i, j) = (face.indices()[0], face.indices()[1]);
        let (ei, ej) = (self.vertex(i), self.vertex(j));
        let di = self.metric.sq_distance_unchecked(x, &ei);
        let dj = self.metric.sq_distance_unchecked(x, &ej);
        if di <= dj {
            ei
        } else {
            ej
        }
    }

    /// Nearest point of the face `face` to `a`.
    fn nearest(&mut self, a: &[f64], face: &FaceIndexSet, depth: usize) -> Result<Candidate> {
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let x = project_unchecked(self.metric, a, face)?;
        self.stats.face_solves += 1;
        let point = if is_in_simplex(&x, FEASIBILITY_TOL) {
            x
        } else if face.len() == 2 {
            self.closer_vertex(&x, face)
        } else {
            let sweep = self.sweep(&x, face, depth)?;
            closest(sweep).1.point
        };
        let sq_dist = self.metric.sq_distance_unchecked(&point, a);
        Ok(Candidate { point, sq_dist })
    }

    fn nearest_memo(&mut self, a: &[f64], face: FaceIndexSet, depth: usize) -> Result<Candidate> {
        let bits = match self.policy {
            MemoPolicy::Face => None,
            MemoPolicy::FaceAndPoint => Some(a.iter().map(|v| v.to_bits()).collect()),
        };
        let key = (face, bits);
        if let Some(point) = self.memo.get(&key) {
            self.stats.cache_hits += 1;
            let sq_dist = self.metric.sq_distance_unchecked(point, a);
            return Ok(Candidate {
                point: point.clone(),
                sq_dist,
            });
        }
        self.stats.cache_misses += 1;
        let found = self.nearest(a, &key.0, depth)?;
        self.memo.insert(key, found.point.clone());
        Ok(found)
    }

    /// Nearest point of every hyperface of `face` to `x`, in index order.
    fn sweep(
        &mut self,
        x: &[f64],
        face: &FaceIndexSet,
        depth: usize,
    ) -> Result<Vec<(usize, Candidate)>> {
        face.indices()
            .iter()
            .map(|&j| {
                let sub = face.without(j).expect("face has at least 3 vertices");
                self.nearest_memo(x, sub, depth + 1).map(|c| (j, c))
            })
            .collect()
    }
}

/// Smallest distance wins; ties go to the earliest (smallest dropped index).
fn closest(sweep: Vec<(usize, Candidate)>) -> (usize, Candidate) {
    let mut iter = sweep.into_iter();
    let mut best = iter.next().expect("non-empty sweep");
    for entry in iter {
        if entry.1.sq_dist < best.1.sq_dist {
            best = entry;
        }
    }
    best
}

fn parallel_sweep(
    metric: &MetricMatrix,
    policy: MemoPolicy,
    x: &[f64],
    face: &FaceIndexSet,
) -> Result<(Vec<(usize, Candidate)>, SearchStats)> {
    let results: Vec<Result<((usize, Candidate), SearchStats)>> = face
        .indices()
        .par_iter()
        .map(|&j| {
            let mut search = Search::new(metric, policy);
            let sub = face.without(j).expect("face has at least 3 vertices");
            search.stats.cache_misses += 1;
            let found = search.nearest(x, &sub, 1)?;
            Ok(((j, found), search.stats))
        })
        .collect();
    let mut sweep = Vec::with_capacity(results.len());
    let mut stats = SearchStats::default();
    for r in results {
        let (entry, s) = r?;
        stats.merge(&s);
        sweep.push(entry);
    }
    Ok((sweep, stats))
}

/// Nearest point of the standard simplex to `a` in the metric `c`, with
/// default options.
pub fn project_onto_simplex(c: &MetricMatrix, a: &[f64]) -> Result<ProjectionResult> {
    project_onto_simplex_with(c, a, ProjectionOptions::default())
}

pub fn project_onto_simplex_with(
    c: &MetricMatrix,
    a: &[f64],
    options: ProjectionOptions,
) -> Result<ProjectionResult> {
    c.check_dim(a.len())?;
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("query point has non-finite coordinates".into()));
    }
    let n = c.dim();
    let full = FaceIndexSet::full(n);
    let mut search = Search::new(c, options.memo);
    if a.iter().all(|&v| v >= 0.0) && is_in_simplex(a, FEASIBILITY_TOL) {
        return finish(c, a, a.to_vec(), search.stats);
    }

    let x = project_unchecked(c, a, &full)?;
    search.stats.face_solves += 1;
    let point = if is_in_simplex(&x, FEASIBILITY_TOL) {
        x
    } else if n > options.max_dim {
        return Err(Error::DimensionTooLarge {
            n,
            max: options.max_dim,
        });
    } else if n == 2 {
        search.closer_vertex(&x, &full)
    } else if options.parallel {
        let (sweep, stats) = parallel_sweep(c, options.memo, &x, &full)?;
        search.stats.merge(&stats);
        closest(sweep).1.point
    } else {
        let sweep = search.sweep(&x, &full, 0)?;
        closest(sweep).1.point
    };
    finish(c, a, point, search.stats)
}

/// Clamps coordinates in `[-tol, 0)` to zero and renormalizes.
fn finish(c: &MetricMatrix, a: &[f64], mut point: Vec<f64>, stats: SearchStats) -> Result<ProjectionResult> {
    if point.iter().any(|&v| v < 0.0) {
        for v in point.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let total: f64 = point.iter().sum();
        for v in point.iter_mut() {
            *v /= total;
        }
    }
    let active: Vec<usize> = point
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > FEASIBILITY_TOL)
        .map(|(i, _)| i)
        .collect();
    let sq_dist = c.sq_distance_unchecked(a, &point);
    let point = WeightVector::new(point)?;
    debug_assert!(point.feasible_simplex());
    Ok(ProjectionResult {
        point,
        sq_dist,
        active_face: FaceIndexSet::new(active)?,
        stats,
    })
}

/// Squared distance from `x` to each hyperface of `face`, keyed by the
/// dropped index, each computed by the full recursive search.
pub fn hyperface_distances(
    c: &MetricMatrix,
    x: &[f64],
    face: &FaceIndexSet,
) -> Result<Vec<(usize, f64)>> {
    c.check_dim(x.len())?;
    face.check_within(c.dim())?;
    if face.len() < 3 {
        return Err(Error::InvalidFace(format!(
            "hyperface sweep needs at least 3 vertices, got {face}"
        )));
    }
    let mut search = Search::new(c, MemoPolicy::default());
    Ok(search
        .sweep(x, face, 0)?
        .into_iter()
        .map(|(j, cand)| (j, cand.sq_dist))
        .collect())
}

/// Index dropped by the closest hyperface in a [`hyperface_distances`]
/// sweep; ties go to the smallest index.
pub fn closest_hyperface(distances: &[(usize, f64)]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &(j, d) in distances {
        match best {
            Some((_, bd)) if d >= bd => {}
            _ => best = Some((j, d)),
        }
    }
    best.map(|(j, _)| j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn three_asset() -> (MetricMatrix, [f64; 3]) {
        let c = MetricMatrix::new(&[
            vec![0.012, 0.004, 0.008],
            vec![0.004, 0.011, 0.007],
            vec![0.008, 0.007, 0.011],
        ])
        .unwrap();
        (c, [0.470, 0.534, -0.004])
    }

    #[test]
    fn membership() {
        assert!(is_in_simplex(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 1e-10));
        assert!(!is_in_simplex(&[0.470, 0.534, -0.004], 1e-10));
        assert!(is_in_simplex(&[1.0 + 5e-11, -5e-11, 0.0], 1e-10));
        assert!(!is_in_simplex(&[0.5, 0.4], 1e-10));
        assert!(is_in_simplex(&[0.5, 0.4], 0.2));
    }

    #[test]
    fn point_in_simplex_is_fixed() {
        let (c, _) = three_asset();
        let a = [0.2, 0.3, 0.5];
        let r = project_onto_simplex(&c, &a).unwrap();
        assert_eq!(r.point.coords(), &a);
        assert_eq!(r.sq_dist, 0.0);
        assert_eq!(r.active_face.indices(), &[0, 1, 2]);
    }

    #[test]
    fn three_asset_instance_lands_on_first_edge() {
        let (c, x) = three_asset();
        let r = project_onto_simplex(&c, &x).unwrap();
        assert_abs_diff_eq!(r.point.coords()[0], 0.46786667, epsilon = 1e-7);
        assert_abs_diff_eq!(r.point.coords()[1], 0.53213333, epsilon = 1e-7);
        assert_eq!(r.point.coords()[2], 0.0);
        assert_eq!(r.active_face.indices(), &[0, 1]);
        assert_abs_diff_eq!(r.sq_dist.sqrt(), 0.0002, epsilon = 5e-4);
    }

    #[test]
    fn three_asset_hyperface_sweep() {
        let (c, x) = three_asset();
        let d = hyperface_distances(&c, &x, &FaceIndexSet::full(3)).unwrap();
        let dropped: Vec<usize> = d.iter().map(|e| e.0).collect();
        assert_eq!(dropped, vec![0, 1, 2]);
        assert_abs_diff_eq!(d[0].1.sqrt(), 0.039, epsilon = 5e-4);
        assert_abs_diff_eq!(d[1].1.sqrt(), 0.048, epsilon = 5e-4);
        assert_abs_diff_eq!(d[2].1.sqrt(), 0.0002, epsilon = 5e-4);
        assert_eq!(closest_hyperface(&d), Some(2));
    }

    #[test]
    fn symmetric_sweep_ties() {
        let c = MetricMatrix::identity(3);
        let x = [1.0 / 3.0; 3];
        let d = hyperface_distances(&c, &x, &FaceIndexSet::full(3)).unwrap();
        // distance to each edge midpoint: (1/6)^2 * 2 + (1/3)^2 = 1/6
        for (_, v) in &d {
            assert_abs_diff_eq!(*v, 1.0 / 6.0, epsilon = 1e-15);
        }
        assert_eq!(closest_hyperface(&d), Some(0));
    }

    #[test]
    fn hyperface_sweep_needs_three_vertices() {
        let c = MetricMatrix::identity(3);
        assert!(matches!(
            hyperface_distances(&c, &[0.5, 0.5, 0.0], &FaceIndexSet::new(vec![0, 1]).unwrap()),
            Err(Error::InvalidFace(_))
        ));
    }

    #[test]
    fn identity_far_point_snaps_to_vertex() {
        let c = MetricMatrix::identity(3);
        let r = project_onto_simplex(&c, &[2.0, 0.0, 0.0]).unwrap();
        assert_eq!(r.point.coords(), &[1.0, 0.0, 0.0]);
        assert_abs_diff_eq!(r.sq_dist, 1.0, epsilon = 1e-15);
        assert_eq!(r.active_face.indices(), &[0]);
    }

    #[test]
    fn one_dimensional_simplex() {
        let c = MetricMatrix::new(&[vec![2.0]]).unwrap();
        let r = project_onto_simplex(&c, &[3.0]).unwrap();
        assert_eq!(r.point.coords(), &[1.0]);
        assert_eq!(r.sq_dist, 8.0);
    }

    #[test]
    fn two_dimensional_edge_case() {
        let c = MetricMatrix::identity(2);
        let r = project_onto_simplex(&c, &[3.0, -1.0]).unwrap();
        assert_eq!(r.point.coords(), &[1.0, 0.0]);
        assert_abs_diff_eq!(r.sq_dist, 5.0, epsilon = 1e-15);
    }

    #[test]
    fn guard_applies_only_when_recursion_needed() {
        let opts = ProjectionOptions {
            max_dim: 2,
            ..Default::default()
        };
        let c = MetricMatrix::identity(3);
        assert!(project_onto_simplex_with(&c, &[0.2, 0.3, 0.5], opts).is_ok());
        assert_eq!(
            project_onto_simplex_with(&c, &[2.0, 0.0, 0.0], opts).unwrap_err(),
            Error::DimensionTooLarge { n: 3, max: 2 }
        );
    }

    #[test]
    fn parallel_sweep_matches_serial() {
        let (c, x) = three_asset();
        let serial = project_onto_simplex(&c, &x).unwrap();
        let par = project_onto_simplex_with(
            &c,
            &x,
            ProjectionOptions {
                parallel: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(serial.point, par.point);
        assert_eq!(serial.sq_dist.to_bits(), par.sq_dist.to_bits());
    }

    #[test]
    fn dimension_mismatch() {
        let (c, _) = three_asset();
        assert!(matches!(
            project_onto_simplex(&c, &[1.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
