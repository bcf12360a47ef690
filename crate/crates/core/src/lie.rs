//! Finite-dimensional Lie algebras over Q given by structure constants.

use std::fmt;

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, quotient_coordinates, Subspace};
use crate::matrix::Matrix;
use crate::rational::{self, int, Rational, Vector};

/// A Lie algebra with basis `e_0..e_{n-1}` and `[e_i, e_j] = sum_k c[i][j][k] e_k`.
///
/// Only the brackets with `i < j` are ever supplied; the full antisymmetric
/// table is synthesized from them.
#[derive(Clone)]
pub struct LieAlgebra {
    names: Vec<String>,
    /// `(i, j, [e_i, e_j])` for `i < j` with nonzero bracket, sorted.
    brackets: Vec<(usize, usize, Vector)>,
    /// Dense table, entry `i * n + j` is `[e_i, e_j]`.
    table: Vec<Vector>,
}

impl PartialEq for LieAlgebra {
    /// Basis names are labels only and do not take part in equality.
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.brackets == other.brackets
    }
}

impl Eq for LieAlgebra {}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieAlgebra")
            .field("dim", &self.dim())
            .field("names", &self.names)
            .field("brackets", &self.brackets.len())
            .finish()
    }
}

pub fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

impl LieAlgebra {
    /// Builds an algebra from its `i < j` brackets. Checks indices and
    /// duplicates but not Jacobi; use [`LieAlgebra::validate`] for that.
    pub fn new(names: Vec<String>, brackets: Vec<(usize, usize, Vector)>) -> Result<Self> {
        let n = names.len();
        let mut table = vec![rational::zeros(n); n * n];
        let mut seen = vec![false; n * n];
        let mut sparse = Vec::new();
        for (i, j, v) in brackets {
            if i >= j || j >= n {
                return Err(Error::BadBracketIndex { i, j, dim: n });
            }
            if v.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "bracket ({i}, {j}) has {} coordinates, algebra has dimension {n}",
                    v.len()
                )));
            }
            if std::mem::replace(&mut seen[i * n + j], true) {
                return Err(Error::DuplicateBracket { i, j });
            }
            if rational::is_zero(&v) {
                continue;
            }
            table[j * n + i] = v.iter().map(|x| -x).collect();
            table[i * n + j] = v.clone();
            sparse.push((i, j, v));
        }
        sparse.sort_by_key(|(i, j, _)| (*i, *j));
        Ok(Self {
            names,
            brackets: sparse,
            table,
        })
    }

    pub fn with_dim(n: usize, brackets: Vec<(usize, usize, Vector)>) -> Result<Self> {
        Self::new(default_names("e", n), brackets)
    }

    /// Builds an algebra from a full (possibly untrusted) table
    /// `tensor[i][j] = [e_i, e_j]`, rejecting it unless it is antisymmetric and
    /// satisfies Jacobi.
    pub fn from_tensor(names: Vec<String>, tensor: &[Vec<Vector>]) -> Result<Self> {
        let report = validate_tensor(tensor);
        if !report.is_valid() {
            return Err(Error::InvalidAlgebra(report));
        }
        let n = tensor.len();
        let brackets = (0..n)
            .tuple_combinations()
            .map(|(i, j)| (i, j, tensor[i][j].clone()))
            .collect();
        Self::new(names, brackets)
    }

    pub fn abelian(n: usize) -> Self {
        Self::with_dim(n, vec![]).expect("abelian algebra is well formed")
    }

    /// `h3`: `[e0, e1] = e2`.
    pub fn heisenberg() -> Self {
        Self::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![(0, 1, vec![int(0), int(0), int(1)])],
        )
        .expect("h3 is well formed")
    }

    /// `sl2` in the basis `(e, f, h)`: `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
    pub fn sl2() -> Self {
        Self::new(
            vec!["e".into(), "f".into(), "h".into()],
            vec![
                (0, 1, vec![int(0), int(0), int(1)]),
                (0, 2, vec![int(-2), int(0), int(0)]),
                (1, 2, vec![int(0), int(2), int(0)]),
            ],
        )
        .expect("sl2 is well formed")
    }

    /// `so3`: `[e0,e1] = e2`, `[e1,e2] = e0`, `[e2,e0] = e1`.
    pub fn so3() -> Self {
        Self::new(
            vec!["l0".into(), "l1".into(), "l2".into()],
            vec![
                (0, 1, vec![int(0), int(0), int(1)]),
                (0, 2, vec![int(0), int(-1), int(0)]),
                (1, 2, vec![int(1), int(0), int(0)]),
            ],
        )
        .expect("so3 is well formed")
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim());
        self.names = names;
        self
    }

    /// Nonzero brackets `(i, j, [e_i, e_j])` with `i < j`.
    pub fn brackets(&self) -> &[(usize, usize, Vector)] {
        &self.brackets
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &Vector {
        &self.table[i * self.dim() + j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.basis_bracket(i, j)[k]
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vector {
        let n = self.dim();
        assert!(u.len() == n && v.len() == n, "vectors must have length dim");
        let mut out = rational::zeros(n);
        for (i, j, c) in &self.brackets {
            let coeff = &u[*i] * &v[*j] - &u[*j] * &v[*i];
            rational::axpy(&mut out, &coeff, c);
        }
        out
    }

    /// Matrix of `ad_u = [u, -]`; column `j` is `[u, e_j]`.
    pub fn ad_matrix(&self, u: &[Rational]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, c) in self.basis_bracket(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        m[(k, j)] += ui * c;
                    }
                }
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Matrix {
        self.ad_matrix(&rational::unit(self.dim(), i))
    }

    /// Full table `t[i][j] = [e_i, e_j]`.
    pub fn tensor(&self) -> Vec<Vec<Vector>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.basis_bracket(i, j).clone()).collect())
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_tensor(&self.tensor())
    }

    /// Returns `self` if it satisfies Jacobi, otherwise `InvalidAlgebra`.
    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        if report.is_valid() {
            Ok(self)
        } else {
            Err(Error::InvalidAlgebra(report))
        }
    }

    /// `{u : [u, v] = 0 for all v}`.
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        // Row block j is the map u -> [u, e_j]; its column i is [e_i, e_j].
        let blocks: Vec<Matrix> = (0..n)
            .map(|j| {
                let cols: Vec<Vector> = (0..n).map(|i| self.basis_bracket(i, j).clone()).collect();
                Matrix::from_columns(n, &cols)
            })
            .collect();
        linalg::nullspace(&Matrix::vstack(n, &blocks))
    }

    pub fn is_central(&self, u: &[Rational]) -> bool {
        (0..self.dim()).all(|j| rational::is_zero(&self.bracket(u, &rational::unit(self.dim(), j))))
    }

    /// `self ⊕ other`: basis of `self` first, cross brackets zero.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let n1 = self.dim();
        let n = n1 + other.dim();
        let mut brackets = Vec::new();
        for (i, j, v) in &self.brackets {
            let mut w = v.clone();
            w.resize(n, Rational::zero());
            brackets.push((*i, *j, w));
        }
        for (i, j, v) in &other.brackets {
            let mut w = rational::zeros(n1);
            w.extend(v.iter().cloned());
            brackets.push((n1 + i, n1 + j, w));
        }
        let names = self.names.iter().chain(&other.names).cloned().collect();
        LieAlgebra::new(names, brackets).expect("direct sum of well-formed algebras")
    }

    /// Quotient by a central subspace on the complement coordinates.
    pub fn quotient_by_central_subspace(&self, s: &Subspace) -> Result<CentralQuotient> {
        let n = self.dim();
        if s.ambient_dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "subspace of Q^{} in algebra of dimension {n}",
                s.ambient_dim()
            )));
        }
        if let Some(index) = (0..s.dim()).find(|&i| !self.is_central(&s.basis_vector(i))) {
            return Err(Error::NotCentral { index });
        }
        let q = quotient_coordinates(n, s);
        let m = q.projection.rows();
        let lifts: Vec<Vector> = (0..m).map(|a| q.section.column(a)).collect();
        let mut brackets = Vec::new();
        for (a, b) in (0..m).tuple_combinations() {
            let v = q.projection.mul_vec(&self.bracket(&lifts[a], &lifts[b]));
            brackets.push((a, b, v));
        }
        let names = (0..m)
            .map(|a| {
                let c = (0..n).find(|&c| !q.section[(c, a)].is_zero()).expect("unit column");
                format!("[{}]", self.names[c])
            })
            .collect();
        let algebra = LieAlgebra::new(names, brackets)?.validated().map_err(|e| {
            Error::InternalCheckFailure(format!("quotient by a central subspace is not a Lie algebra: {e}"))
        })?;
        let projection = LieHom::new(self.clone(), algebra.clone(), q.projection)?;
        Ok(CentralQuotient {
            algebra,
            projection,
            section: q.section,
        })
    }
}

/// Result of dividing an algebra by a central subspace.
#[derive(Clone, Debug)]
pub struct CentralQuotient {
    pub algebra: LieAlgebra,
    pub projection: LieHom,
    /// Linear right inverse of the projection (not a homomorphism).
    pub section: Matrix,
}

/// A failed axiom with its residual. The Jacobi residual is
/// `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]` for `i < j < k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Antisymmetry {
        i: usize,
        j: usize,
        residual: Vector,
    },
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        residual: Vector,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match v {
                Violation::Antisymmetry { i, j, residual } => format!(
                    "antisymmetry fails on ({i}, {j}): [e{i},e{j}] + [e{j},e{i}] = {:?}",
                    rational::format_vector(residual)
                ),
                Violation::Jacobi { i, j, k, residual } => format!(
                    "Jacobi fails on ({i}, {j}, {k}): residual {:?}",
                    rational::format_vector(residual)
                ),
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks a raw bracket table for antisymmetry on every pair `i <= j` and for
/// Jacobi on every triple `i < j < k`.
pub fn validate_tensor(tensor: &[Vec<Vector>]) -> ValidationReport {
    let n = tensor.len();
    let mut violations = Vec::new();
    for (i, j) in (0..n).flat_map(|i| (i..n).map(move |j| (i, j))) {
        let residual = rational::add(&tensor[i][j], &tensor[j][i]);
        if !rational::is_zero(&residual) {
            violations.push(Violation::Antisymmetry { i, j, residual });
        }
    }
    let support: Vec<Vec<Vec<(usize, &Rational)>>> = tensor
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
                .collect()
        })
        .collect();
    for (i, j, k) in (0..n).tuple_combinations() {
        let mut residual: Option<Vector> = None;
        for (p, q, r) in [(i, j, k), (j, k, i), (k, i, j)] {
            for &(a, c) in &support[p][q] {
                for &(l, x) in &support[a][r] {
                    residual.get_or_insert_with(|| rational::zeros(n))[l] += c * x;
                }
            }
        }
        if let Some(residual) = residual.filter(|r| !rational::is_zero(r)) {
            violations.push(Violation::Jacobi { i, j, k, residual });
        }
    }
    ValidationReport { violations }
}

/// A linear map between Lie algebras that preserves brackets.
#[derive(Clone, Debug)]
pub struct LieHom {
    source: LieAlgebra,
    target: LieAlgebra,
    matrix: Matrix,
}

impl LieHom {
    pub fn new(source: LieAlgebra, target: LieAlgebra, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "homomorphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        let n = source.dim();
        for (i, j) in (0..n).tuple_combinations() {
            let lhs = matrix.mul_vec(source.basis_bracket(i, j));
            let rhs = target.bracket(&matrix.column(i), &matrix.column(j));
            if lhs != rhs {
                return Err(Error::NotHomomorphism { i, j });
            }
        }
        Ok(Self { source, target, matrix })
    }

    pub fn source(&self) -> &LieAlgebra {
        &self.source
    }

    pub fn target(&self) -> &LieAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, u: &[Rational]) -> Vector {
        self.matrix.mul_vec(u)
    }

    pub fn kernel(&self) -> Subspace {
        linalg::nullspace(&self.matrix)
    }

    pub fn image(&self) -> Subspace {
        Subspace::row_space(&self.matrix.transpose())
    }
}
