//! Exact row reduction and the subspace bookkeeping built on it.
//!
//! Every subspace is stored by the reduced row-echelon form of a spanning
//! set, which is unique. Equality of subspaces is therefore equality of
//! data, and quotient coordinates are read off the non-pivot columns.

use num_traits::{One, Zero};

use crate::matrix::Matrix;
use crate::rational::{self, Rational, Vector};

/// Reduced row-echelon form with zero rows removed, plus the pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let cols = m.cols();
    let mut rows: Vec<Vector> = m.row_vectors();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r].iter_mut().skip(c) {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = -row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x += &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (Matrix::from_rows(cols, &rows), pivots)
}

/// A linear subspace of `Q^ambient_dim`, presented by its RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        let (basis, pivots) = rref(m);
        Self {
            ambient_dim: m.cols(),
            basis,
            pivots,
        }
    }

    pub fn span(ambient_dim: usize, vectors: &[Vector]) -> Self {
        Self::row_space(&Matrix::from_rows(ambient_dim, vectors))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Canonical basis rows (RREF).
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        self.basis.row(i).to_vec()
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the subspace. For an RREF basis the candidate coordinates are the
    /// pivot entries of `v`; membership is decided by the exact residual.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient_dim, "vector length must match ambient dimension");
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (i, c) in coords.iter().enumerate() {
            rational::axpy(&mut residual, &-c.clone(), self.basis.row(i));
        }
        rational::is_zero(&residual).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Element with the given coordinates.
    pub fn combination(&self, coords: &[Rational]) -> Vector {
        assert_eq!(coords.len(), self.dim());
        let mut v = rational::zeros(self.ambient_dim);
        for (i, c) in coords.iter().enumerate() {
            rational::axpy(&mut v, c, self.basis.row(i));
        }
        v
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient_dim == self.ambient_dim && (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    /// Re-expresses `sub` (which must lie inside `self`) in the coordinates
    /// of `self`'s canonical basis.
    pub fn relative(&self, sub: &Subspace) -> Option<Subspace> {
        let rows = (0..sub.dim())
            .map(|i| self.coordinates(sub.basis.row(i)))
            .collect::<Option<Vec<_>>>()?;
        Some(Subspace::span(self.dim(), &rows))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        Subspace::row_space(&Matrix::vstack(
            self.ambient_dim,
            &[self.basis.clone(), other.basis.clone()],
        ))
    }

    /// Image of the subspace under a linear map given as a matrix.
    pub fn image_under(&self, map: &Matrix) -> Subspace {
        assert_eq!(map.cols(), self.ambient_dim);
        let rows: Vec<Vector> = self.basis_vectors().iter().map(|v| map.mul_vec(v)).collect();
        Subspace::span(map.rows(), &rows)
    }
}

/// Kernel of `m` as a subspace of `Q^cols`.
pub fn nullspace(m: &Matrix) -> Subspace {
    let n = m.cols();
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut vectors = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = rational::zeros(n);
        v[free] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r[(i, free)].clone();
        }
        vectors.push(v);
    }
    Subspace::span(n, &vectors)
}

/// Solves `a x = b`. Free variables are set to zero, so the answer is the
/// unique pivot solution; `None` means the system is inconsistent.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vector> {
    assert_eq!(b.len(), a.rows(), "right-hand side length must equal row count");
    let n = a.cols();
    let augmented = Matrix::hstack(a, &Matrix::from_columns(a.rows(), &[b.to_vec()]));
    let (r, pivots) = rref(&augmented);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = rational::zeros(n);
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[(i, n)].clone();
    }
    Some(x)
}

/// Coordinates on `Q^ambient / sub`.
///
/// `projection` has kernel exactly `sub`; `section` is the right inverse that
/// sends the quotient basis to the unit vectors of the non-pivot columns of
/// `sub`'s canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCoordinates {
    pub projection: Matrix,
    pub section: Matrix,
}

pub fn quotient_coordinates(ambient_dim: usize, sub: &Subspace) -> QuotientCoordinates {
    assert_eq!(sub.ambient_dim(), ambient_dim, "subspace lives in a different space");
    let mut is_pivot = vec![false; ambient_dim];
    for &p in sub.pivots() {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..ambient_dim).filter(|&c| !is_pivot[c]).collect();
    let q = free.len();
    let mut projection = Matrix::zeros(q, ambient_dim);
    let mut section = Matrix::zeros(ambient_dim, q);
    // proj(v)_c = v_c - sum_i v_{p_i} b_i[c]: reduce v modulo sub, keep free columns.
    for (a, &c) in free.iter().enumerate() {
        projection[(a, c)] = Rational::one();
        for (i, &p) in sub.pivots().iter().enumerate() {
            let b = &sub.basis()[(i, c)];
            if !b.is_zero() {
                projection[(a, p)] = -b.clone();
            }
        }
        section[(c, a)] = Rational::one();
    }
    QuotientCoordinates { projection, section }
}

pub fn membership(sub: &Subspace, v: &[Rational]) -> bool {
    sub.contains(v)
}
