//! C-orthogonal projection onto the affine hull of a face of the standard
//! simplex.
//!
//! For a face `J` with pivot `i0 = min J`, the projection `x` of `a` is the
//! unique point with `x_j = 0` off `J`, `sum_J x_j = 1` and
//! `<x - a, e_i0 - e_i> = 0` for every other `i` in `J`. Expanding the
//! inner products gives an `|J| x |J|` system.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{solve_linear, MetricMatrix};

/// Nonempty, strictly increasing set of coordinate indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FaceIndexSet(Vec<usize>);

impl FaceIndexSet {
    /// Builds a face from arbitrary indices; they are sorted, and duplicates
    /// are rejected.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidFace("empty index set".into()));
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidFace(format!("duplicate index in {indices:?}")));
        }
        Ok(Self(indices))
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n > 0, "face of an empty simplex");
        Self((0..n).collect())
    }

    pub fn singleton(k: usize) -> Self {
        Self(vec![k])
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest index; anchors the direction basis `e_pivot - e_i`.
    pub fn pivot(&self) -> usize {
        self.0[0]
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.binary_search(&k).is_ok()
    }

    /// The hyperface obtained by dropping index `k`, if it leaves a nonempty
    /// set.
    pub fn without(&self, k: usize) -> Option<Self> {
        if self.0.len() <= 1 {
            return None;
        }
        let rest: Vec<usize> = self.0.iter().copied().filter(|&i| i != k).collect();
        if rest.len() == self.0.len() {
            return None;
        }
        Some(Self(rest))
    }

    /// Indices not in the face, for ambient dimension `n`.
    pub fn complement(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| !self.contains(i)).collect()
    }

    pub(crate) fn check_within(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&max) if max >= n => Err(Error::InvalidFace(format!(
                "index {max} out of range for dimension {n}"
            ))),
            _ => Ok(()),
        }
    }
}

impl TryFrom<Vec<usize>> for FaceIndexSet {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<FaceIndexSet> for Vec<usize> {
    fn from(f: FaceIndexSet) -> Self {
        f.0
    }
}

impl fmt::Display for FaceIndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Projects `a` onto the affine hull of face `face`, orthogonally for the
/// inner product defined by `c`.
pub fn project_onto_face_hull(c: &MetricMatrix, a: &[f64], face: &FaceIndexSet) -> Result<Vec<f64>> {
    c.check_dim(a.len())?;
    face.check_within(c.dim())?;
    project_unchecked(c, a, face)
}

pub(crate) fn project_unchecked(c: &MetricMatrix, a: &[f64], face: &FaceIndexSet) -> Result<Vec<f64>> {
    let n = c.dim();
    let mut x = vec![0.0; n];
    let idx = face.indices();
    if idx.len() == 1 {
        x[idx[0]] = 1.0;
        return Ok(x);
    }
    let m = idx.len();
    let i0 = face.pivot();
    let mut system = DMatrix::<f64>::zeros(m, m);
    let mut rhs = vec![0.0; m];
    for (row, &i) in idx[1..].iter().enumerate() {
        for (col, &j) in idx.iter().enumerate() {
            system[(row, col)] = c.get(i, j) - c.get(i0, j);
        }
        rhs[row] = (0..n).map(|j| a[j] * (c.get(i, j) - c.get(i0, j))).sum();
    }
    for col in 0..m {
        system[(m - 1, col)] = 1.0;
    }
    rhs[m - 1] = 1.0;
    let sol = solve_linear(&system, &rhs)?;
    for (&j, v) in idx.iter().zip(sol) {
        x[j] = v;
    }
    Ok(x)
}
