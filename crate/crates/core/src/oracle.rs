//! Reference solvers, independent of the recursive search, for checking
//! projections and minimum-variance weights.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::face::{project_unchecked, FaceIndexSet};
use crate::metric::{solve_linear, MetricMatrix};
use crate::simplex::{ProjectionResult, SearchStats, FEASIBILITY_TOL};
use crate::weights::WeightVector;

/// Largest dimension accepted by [`oracle_project`].
pub const ORACLE_MAX_DIM: usize = 12;

/// Exhaustive projection: the affine-hull projection onto every face is
/// computed, infeasible ones are discarded and the closest survivor is kept.
///
/// The true minimizer lies in the relative interior of some face, where it
/// coincides with that face's affine-hull projection, so it is always among
/// the candidates. Ties go to the lexicographically smallest face.
pub fn oracle_project(c: &MetricMatrix, a: &[f64]) -> Result<ProjectionResult> {
    oracle_project_with(c, a, false)
}

pub fn oracle_project_with(c: &MetricMatrix, a: &[f64], parallel: bool) -> Result<ProjectionResult> {
    c.check_dim(a.len())?;
    let n = c.dim();
    if n > ORACLE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: ORACLE_MAX_DIM,
        });
    }
    let evaluate = |mask: u32| -> Result<Option<(FaceIndexSet, Vec<f64>, f64)>> {
        let face = FaceIndexSet::new((0..n).filter(|i| mask & (1 << i) != 0).collect())?;
        let x = project_unchecked(c, a, &face)?;
        if x.iter().any(|&v| v < -FEASIBILITY_TOL) {
            return Ok(None);
        }
        let d = c.sq_distance_unchecked(a, &x);
        Ok(Some((face, x, d)))
    };
    let masks = 1u32..(1u32 << n);
    let candidates: Vec<_> = if parallel {
        masks.into_par_iter().map(evaluate).collect::<Result<Vec<_>>>()?
    } else {
        masks.map(evaluate).collect::<Result<Vec<_>>>()?
    };
    let mut best: Option<(FaceIndexSet, Vec<f64>, f64)> = None;
    for cand in candidates.into_iter().flatten() {
        best = match best {
            Some(b) if b.2 < cand.2 || (b.2 == cand.2 && b.0 <= cand.0) => Some(b),
            _ => Some(cand),
        };
    }
    // Every vertex is feasible, so at least one candidate exists.
    let (_, mut point, _) = best.expect("vertices are always feasible");
    if point.iter().any(|&v| v < 0.0) {
        point.iter_mut().for_each(|v| *v = v.max(0.0));
        let total: f64 = point.iter().sum();
        point.iter_mut().for_each(|v| *v /= total);
    }
    let active: Vec<usize> = (0..n).filter(|&i| point[i] > FEASIBILITY_TOL).collect();
    let sq_dist = c.sq_distance_unchecked(a, &point);
    Ok(ProjectionResult {
        point: WeightVector::new(point)?,
        sq_dist,
        active_face: FaceIndexSet::new(active)?,
        stats: SearchStats {
            face_solves: (1usize << n) - 1,
            ..SearchStats::default()
        },
    })
}

/// Sort-and-threshold projection onto the simplex for the identity metric.
pub fn euclidean_sort_project(a: &[f64]) -> Result<WeightVector> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty point".into()));
    }
    let mut sorted = a.to_vec();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let mut prefix = 0.0;
    let mut tau = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        prefix += v;
        let t = (prefix - 1.0) / (k + 1) as f64;
        if v - t > 0.0 {
            tau = t;
        }
    }
    WeightVector::new(a.iter().map(|&v| (v - tau).max(0.0)).collect())
}

/// Minimum of `x' C x` over `sum(x) = 1` from the bordered KKT system
/// `[[2C, u], [u', 0]] (x, lambda) = (0, 1)`.
pub fn oracle_minvar_hyperplane(c: &MetricMatrix) -> Result<WeightVector> {
    let n = c.dim();
    let kkt = DMatrix::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
        (true, true) => 2.0 * c.get(i, j),
        (true, false) | (false, true) => 1.0,
        (false, false) => 0.0,
    });
    let mut rhs = vec![0.0; n + 1];
    rhs[n] = 1.0;
    let mut sol = solve_linear(&kkt, &rhs)?;
    sol.truncate(n);
    WeightVector::new(sol)
}
