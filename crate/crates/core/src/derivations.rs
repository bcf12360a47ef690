//! Derivations, inner derivations and outer derivations of a Lie algebra.
//!
//! An endomorphism `D` of `Q^n` is handled as the flattened vector of its
//! matrix (entry `(r, c)` at coordinate `r * n + c`), so `Der` and `Inn` are
//! subspaces of `Q^{n^2}`. `Out = Der / Inn` gets explicit coordinates from
//! the canonical quotient of `Inn` inside `Der`.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{self, quotient_coordinates, Subspace};
use crate::matrix::Matrix;
use crate::rational::{self, Rational, Vector};

#[derive(Clone, Debug)]
pub struct DerivationSpaces {
    algebra: LieAlgebra,
    der: Subspace,
    inn: Subspace,
    /// `Der coordinates -> Out coordinates`, kernel = Inn.
    natural_projection: Matrix,
    /// `Out coordinates -> Der coordinates`, right inverse of the projection.
    out_section: Matrix,
    out_algebra: LieAlgebra,
}

pub fn flatten(m: &Matrix) -> Vector {
    m.to_flat()
}

pub fn unflatten(n: usize, v: &[Rational]) -> Matrix {
    Matrix::from_vec(n, n, v.to_vec())
}

/// Linear system whose kernel is `Der(g)`: for every `i < j`,
/// `D[e_i,e_j] - [D e_i, e_j] - [e_i, D e_j] = 0`.
fn derivation_system(g: &LieAlgebra) -> Matrix {
    let n = g.dim();
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let mut sys = Matrix::zeros(pairs.len() * n, n * n);
    for (p, &(i, j)) in pairs.iter().enumerate() {
        let cij = g.basis_bracket(i, j);
        for k in 0..n {
            let row = p * n + k;
            // (D [e_i, e_j])_k = sum_r D_{k r} c_ij^r
            for (r, c) in cij.iter().enumerate() {
                sys[(row, k * n + r)] += c;
            }
            // ([D e_i, e_j])_k = sum_r D_{r i} c_rj^k
            // ([e_i, D e_j])_k = sum_r D_{r j} c_ir^k
            for r in 0..n {
                sys[(row, r * n + i)] -= g.structure_constant(r, j, k);
                sys[(row, r * n + j)] -= g.structure_constant(i, r, k);
            }
        }
    }
    sys
}

impl DerivationSpaces {
    pub fn new(g: &LieAlgebra) -> Result<Self> {
        let report = g.validate();
        if !report.is_valid() {
            return Err(Error::InvalidAlgebra(report));
        }
        let n = g.dim();
        let der = linalg::nullspace(&derivation_system(g));
        let ads: Vec<Vector> = (0..n).map(|i| flatten(&g.ad_basis(i))).collect();
        let inn = Subspace::span(n * n, &ads);

        let inn_in_der = der
            .relative(&inn)
            .ok_or_else(|| Error::InternalCheckFailure("an inner derivation failed the derivation test".into()))?;
        // [Der, Inn] ⊆ Inn, so the commutator descends to Out.
        for a in der.basis_vectors() {
            let da = unflatten(n, &a);
            for b in inn.basis_vectors() {
                let c = da.commutator(&unflatten(n, &b));
                if !inn.contains(&flatten(&c)) {
                    return Err(Error::InternalCheckFailure("Inn is not an ideal of Der".into()));
                }
            }
        }
        let q = quotient_coordinates(der.dim(), &inn_in_der);
        let out_dim = q.projection.rows();

        let reps: Vec<Matrix> = (0..out_dim)
            .map(|a| unflatten(n, &der.combination(&q.section.column(a))))
            .collect();
        let mut brackets = Vec::new();
        for (a, b) in (0..out_dim).tuple_combinations() {
            let c = flatten(&reps[a].commutator(&reps[b]));
            let coords = der
                .coordinates(&c)
                .ok_or_else(|| Error::InternalCheckFailure("commutator of derivations is not a derivation".into()))?;
            brackets.push((a, b, q.projection.mul_vec(&coords)));
        }
        let out_algebra = LieAlgebra::new(crate::lie::default_names("o", out_dim), brackets)?
            .validated()
            .map_err(|e| Error::InternalCheckFailure(format!("bracket on Out fails Jacobi: {e}")))?;

        Ok(Self {
            algebra: g.clone(),
            der,
            inn,
            natural_projection: q.projection,
            out_section: q.section,
            out_algebra,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn der(&self) -> &Subspace {
        &self.der
    }

    pub fn inn(&self) -> &Subspace {
        &self.inn
    }

    pub fn out_dim(&self) -> usize {
        self.natural_projection.rows()
    }

    pub fn natural_projection(&self) -> &Matrix {
        &self.natural_projection
    }

    pub fn out_section(&self) -> &Matrix {
        &self.out_section
    }

    /// `Out(g)` with the bracket induced by the commutator.
    pub fn out_algebra(&self) -> &LieAlgebra {
        &self.out_algebra
    }

    pub fn is_derivation(&self, d: &Matrix) -> bool {
        self.der.contains(&flatten(d))
    }

    pub fn is_inner(&self, d: &Matrix) -> bool {
        self.inn.contains(&flatten(d))
    }

    pub fn der_coordinates(&self, d: &Matrix) -> Option<Vector> {
        self.der.coordinates(&flatten(d))
    }

    pub fn der_matrix(&self, coords: &[Rational]) -> Matrix {
        unflatten(self.algebra.dim(), &self.der.combination(coords))
    }

    /// Image of a derivation in `Out` coordinates (`None` if not a derivation).
    pub fn outer_class(&self, d: &Matrix) -> Option<Vector> {
        self.der_coordinates(d).map(|c| self.natural_projection.mul_vec(&c))
    }

    /// Representative derivation of an `Out` element via the stored section.
    pub fn out_representative(&self, out: &[Rational]) -> Matrix {
        self.der_matrix(&self.out_section.mul_vec(out))
    }

    /// Matrix (in `Der` coordinates) of `D -> [nabla, D]` for a derivation `nabla`.
    pub fn der_action(&self, nabla: &Matrix) -> Result<Matrix> {
        let k = self.der.dim();
        let mut cols = Vec::with_capacity(k);
        for b in self.der.basis_vectors() {
            let c = nabla.commutator(&unflatten(self.algebra.dim(), &b));
            cols.push(
                self.der_coordinates(&c)
                    .ok_or_else(|| Error::InternalCheckFailure("commutator with a derivation left Der".into()))?,
            );
        }
        Ok(Matrix::from_columns(k, &cols))
    }

    /// `ad_u` in `Der` coordinates.
    pub fn ad_coordinates(&self, u: &[Rational]) -> Vector {
        self.der_coordinates(&self.algebra.ad_matrix(u))
            .expect("inner derivations are derivations")
    }

    /// Matrix of `ad : g -> Der(g)` in `Der` coordinates.
    pub fn ad_map(&self) -> Matrix {
        let n = self.algebra.dim();
        let cols: Vec<Vector> = (0..n).map(|i| self.ad_coordinates(&rational::unit(n, i))).collect();
        Matrix::from_columns(self.der.dim(), &cols)
    }
}
