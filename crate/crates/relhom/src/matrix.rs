//! Dense matrices over an exact field, with the row-reduction toolbox every
//! higher layer reduces to: rank, solve, kernel, image, quotients.
//!
//! Pivoting is always left-to-right on columns and top-down on rows, so every
//! derived basis is deterministic.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// A rows x cols matrix with row-major entries over a fixed field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Mat {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        Mat {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        let entries = (0..rows * cols).map(|_| field.zero()).collect();
        Mat::new(field, rows, cols, entries)
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Mat::new(field, rows, cols, entries)
    }

    /// Builds a matrix from integer rows, mapped into the field.
    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
        }
        Mat::from_fn(field, nrows, ncols, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |r, c| {
            self.at(c, r).clone()
        })
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.field, self.rows, self.cols, |r, c| {
            self.field.add(self.at(r, c), other.at(r, c))
        })
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.field, self.rows, self.cols, |r, c| {
            self.field.sub(self.at(r, c), other.at(r, c))
        })
    }

    pub fn neg(&self) -> Mat {
        Mat::from_fn(self.field, self.rows, self.cols, |r, c| {
            self.field.neg(self.at(r, c))
        })
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat::from_fn(self.field, self.rows, self.cols, |r, c| {
            self.field.mul(s, self.at(r, c))
        })
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = self.field;
        Mat::from_fn(f, self.rows, other.cols, |r, c| {
            let mut acc = f.zero();
            for k in 0..self.cols {
                acc = f.add(&acc, &f.mul(self.at(r, k), other.at(k, c)));
            }
            acc
        })
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Mat::from_fn(self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                other.at(r, c - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vstack col mismatch");
        Mat::from_fn(self.field, self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.at(r, c).clone()
            } else {
                other.at(r - self.rows, c).clone()
            }
        })
    }

    /// Assembles a block matrix from a grid of blocks; row/column counts of
    /// the blocks must be consistent along each band.
    pub fn block(field: FieldSpec, grid: &[Vec<&Mat>]) -> Mat {
        if grid.is_empty() || grid[0].is_empty() {
            return Mat::zero(field, 0, 0);
        }
        let mut rows_of = Vec::new();
        for band in grid {
            let mut acc = band[0].clone();
            for b in &band[1..] {
                acc = acc.hstack(b);
            }
            rows_of.push(acc);
        }
        let mut out = rows_of[0].clone();
        for band in &rows_of[1..] {
            out = out.vstack(band);
        }
        out
    }

    /// Block-diagonal assembly.
    pub fn block_diag(field: FieldSpec, blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zero(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.at(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn col(&self, j: usize) -> Mat {
        Mat::from_fn(self.field, self.rows, 1, |r, _| self.at(r, j).clone())
    }

    pub fn select_cols(&self, js: &[usize]) -> Mat {
        Mat::from_fn(self.field, self.rows, js.len(), |r, k| {
            self.at(r, js[k]).clone()
        })
    }

    /// Reduced row echelon form plus the pivot column indices.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let pivot_row = (row..m.rows).find(|&r| !f.is_zero(m.at(r, col)));
            let Some(pr) = pivot_row else { continue };
            if pr != row {
                for c in 0..m.cols {
                    let a = m.at(row, c).clone();
                    let b = m.at(pr, c).clone();
                    m.set(row, c, b);
                    m.set(pr, c, a);
                }
            }
            let inv = f.inv(m.at(row, col)).expect("pivot nonzero");
            for c in 0..m.cols {
                let v = f.mul(&inv, m.at(row, c));
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !f.is_zero(m.at(r, col)) {
                    let factor = m.at(r, col).clone();
                    for c in 0..m.cols {
                        let v = f.sub(m.at(r, c), &f.mul(&factor, m.at(row, c)));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Solves `self * X = b`, returning the canonical solution with free
    /// variables set to zero, or `None` when inconsistent.
    pub fn solve(&self, b: &Mat) -> Result<Option<Mat>> {
        if self.rows != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: lhs has {} rows, rhs has {}",
                self.rows, b.rows
            )));
        }
        let f = self.field;
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        // a pivot in the rhs block means inconsistency
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Mat::zero(f, self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(p, c, r.at(i, self.cols + c).clone());
            }
        }
        Ok(Some(x))
    }

    /// Canonical null-space basis, one column per free variable.
    pub fn kernel_basis(&self) -> Mat {
        let f = self.field;
        let (r, pivots) = self.rref();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|&c| !pivot_set[c]).collect();
        let mut basis = Mat::zero(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, f.one());
            for (i, &p) in pivots.iter().enumerate() {
                basis.set(p, k, f.neg(r.at(i, fc)));
            }
        }
        basis
    }

    /// Basis of the column space: the pivot columns of the original matrix.
    pub fn image_basis(&self) -> Mat {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let id = Mat::identity(self.field, self.rows);
        match self.solve(&id).expect("square system") {
            Some(x) => {
                if self.mul(&x) == id {
                    Some(x)
                } else {
                    None
                }
            }
            None => None,
        }
    }

    /// Projection onto a canonical complement of the column span of
    /// `subspace` inside the ambient space: returns P with P*subspace = 0,
    /// of shape (ambient - rank) x ambient.
    pub fn complement_projection(&self) -> Mat {
        let f = self.field;
        let n = self.rows;
        let basis = self.image_basis();
        let r = basis.cols();
        // pivot rows of the basis = pivot columns of its transpose
        let (_, pivot_rows) = basis.transpose().rref();
        let mut is_pivot = vec![false; n];
        for &p in &pivot_rows {
            is_pivot[p] = true;
        }
        let complement: Vec<usize> = (0..n).filter(|&i| !is_pivot[i]).collect();
        let mut e = Mat::zero(f, n, complement.len());
        for (k, &i) in complement.iter().enumerate() {
            e.set(i, k, f.one());
        }
        let w = basis.hstack(&e);
        let w_inv = w.inverse().expect("basis + complement spans");
        Mat::from_fn(f, n - r, n, |i, j| w_inv.at(r + i, j).clone())
    }

    /// Flattens row-major into a single column vector.
    pub fn flatten_column(&self) -> Mat {
        Mat::new(self.field, self.rows * self.cols, 1, self.entries.clone())
    }
}

/// rank-nullity style quotient dimension: ambient minus rank of the subspace.
pub fn quotient_dim(ambient_dim: usize, subspace: &Mat) -> Result<usize> {
    if subspace.rows() != ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "quotient_dim: subspace lives in dimension {}, ambient is {}",
            subspace.rows(),
            ambient_dim
        )));
    }
    Ok(ambient_dim - subspace.rank())
}

#[derive(Serialize, Deserialize)]
struct MatRepr {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = MatRepr {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| self.field.format(e)).collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatRepr::deserialize(deserializer)?;
        if repr.entries.len() != repr.rows * repr.cols {
            return Err(D::Error::custom("matrix entry count mismatch"));
        }
        let entries = repr
            .entries
            .iter()
            .map(|s| repr.field.parse(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(Mat::new(repr.field, repr.rows, repr.cols, entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(Mat::identity(q(), 2).rank(), 2);
        assert_eq!(Mat::zero(q(), 2, 2).rank(), 0);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = Mat::from_i64_rows(q(), &[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = Mat::from_i64_rows(q(), &[&[3], &[5]]);
        let x = Mat::identity(q(), 2).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_zero_system() {
        let a = Mat::zero(q(), 2, 2);
        let b = Mat::zero(q(), 2, 1);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(x, Mat::zero(q(), 2, 1));
    }

    #[test]
    fn solve_underdetermined_uses_first_pivot() {
        let a = Mat::from_i64_rows(q(), &[&[1, 1]]);
        let b = Mat::from_i64_rows(q(), &[&[3]]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(x, Mat::from_i64_rows(q(), &[&[3], &[0]]));
    }

    #[test]
    fn solve_inconsistent_is_none() {
        let a = Mat::from_i64_rows(q(), &[&[1, 2], &[2, 4]]);
        let b = Mat::from_i64_rows(q(), &[&[1], &[0]]);
        assert_eq!(a.solve(&b).unwrap(), None);
    }

    #[test]
    fn solve_shape_mismatch_errors() {
        let a = Mat::identity(q(), 2);
        let b = Mat::zero(q(), 3, 1);
        assert!(a.solve(&b).is_err());
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert_eq!(Mat::identity(q(), 3).kernel_basis().cols(), 0);
    }

    #[test]
    fn kernel_of_zero_is_identity() {
        let k = Mat::zero(q(), 3, 3).kernel_basis();
        assert_eq!(k, Mat::identity(q(), 3));
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = Mat::from_i64_rows(q(), &[&[1, 2], &[2, 4]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        // proportional to (2, -1): kernel vector is (-2, 1) under the rref convention
        assert_eq!(k, Mat::from_i64_rows(q(), &[&[-2], &[1]]));
    }

    #[test]
    fn image_basis_of_identity() {
        assert_eq!(Mat::identity(q(), 3).image_basis().cols(), 3);
    }

    #[test]
    fn invertibility() {
        assert!(!Mat::zero(q(), 1, 1).is_invertible());
        assert!(Mat::identity(q(), 4).is_invertible());
        let m = Mat::from_i64_rows(q(), &[&[0, 1], &[1, 0]]);
        assert_eq!(m.inverse().unwrap(), m);
    }

    #[test]
    fn quotient_dims() {
        let sub = Mat::from_i64_rows(q(), &[&[1], &[0], &[0]]);
        assert_eq!(quotient_dim(3, &sub).unwrap(), 2);
        assert!(quotient_dim(2, &sub).is_err());
    }

    #[test]
    fn complement_projection_kills_subspace() {
        let sub = Mat::from_i64_rows(q(), &[&[1, 1], &[0, 1], &[1, 0]]);
        let p = sub.complement_projection();
        assert_eq!(p.rows(), 1);
        assert!(p.mul(&sub).is_zero());
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn prime_field_rank() {
        let f = FieldSpec::prime(2).unwrap();
        // [[1,1],[1,1]] over F2 has rank 1
        let m = Mat::from_i64_rows(f, &[&[1, 1], &[1, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn zero_sized_matrices_behave() {
        let m = Mat::zero(q(), 0, 3);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel_basis().cols(), 3);
        let n = Mat::zero(q(), 3, 0);
        assert_eq!(n.rank(), 0);
        assert_eq!(n.kernel_basis().cols(), 0);
        assert_eq!(n.mul(&m).rows(), 3);
    }

    #[test]
    fn serde_roundtrip() {
        let m = Mat::from_i64_rows(q(), &[&[1, -2], &[3, 4]]);
        let json = serde_json::to_string(&m).unwrap();
        let back: Mat = serde_json::from_str(&json).unwrap();
        assert_eq!(m, back);
    }
}
