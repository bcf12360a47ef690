//! Chevalley-Eilenberg cochains of a base algebra `T` with values in a
//! `T`-module, their differential and cohomology.
//!
//! A k-cochain is stored by its values on the strictly increasing k-tuples of
//! basis indices of `T`, in lexicographic order. Values on other tuples follow
//! by alternation. The differential is
//!
//! ```text
//! (dc)(X_0..X_k) = sum_i (-1)^i rho(X_i) c(.., ^X_i, ..)
//!                + sum_{i<j} (-1)^{i+j} c([X_i, X_j], .., ^X_i, .., ^X_j, ..)
//! ```
//!
//! and it is also available for an arbitrary (non-flat) family of matrices,
//! in which case `d∘d` need not vanish.

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{self, quotient_coordinates, QuotientCoordinates, Subspace};
use crate::matrix::Matrix;
use crate::rational::{self, Rational, Vector};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Increasing k-tuples of `0..m` in lexicographic order.
pub fn tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    (0..m).combinations(k).collect()
}

/// Lexicographic rank of an increasing tuple among the k-subsets of `0..m`.
pub fn tuple_index(m: usize, tuple: &[usize]) -> usize {
    let k = tuple.len();
    let mut rank = 0;
    let mut next = 0;
    for (pos, &t) in tuple.iter().enumerate() {
        debug_assert!(t >= next && t < m, "tuple must be increasing and in range");
        for v in next..t {
            rank += binomial(m - 1 - v, k - 1 - pos);
        }
        next = t + 1;
    }
    rank
}

/// Sorts a tuple, returning the sign of the sorting permutation, or `None`
/// if an index repeats.
fn sort_with_sign(tuple: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut t = tuple.to_vec();
    let mut negative = false;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if t.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((t, negative))
}

/// A flat action of the base algebra on `Q^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TModule {
    base: LieAlgebra,
    dim: usize,
    action: Vec<Matrix>,
}

/// First base pair `(i, j)` on which `rho([X_i,X_j]) != [rho(X_i), rho(X_j)]`.
pub fn flatness_defect(base: &LieAlgebra, action: &[Matrix]) -> Option<(usize, usize, Matrix)> {
    let m = base.dim();
    for (i, j) in (0..m).tuple_combinations() {
        let lhs = combine_action(action, base.basis_bracket(i, j), action.first()?.rows());
        let rhs = action[i].commutator(&action[j]);
        if lhs != rhs {
            return Some((i, j, rhs.sub(&lhs)));
        }
    }
    None
}

/// `sum_l coeffs[l] * action[l]`.
fn combine_action(action: &[Matrix], coeffs: &[Rational], dim: usize) -> Matrix {
    let mut out = Matrix::zeros(dim, dim);
    for (a, c) in action.iter().zip(coeffs) {
        if !c.is_zero() {
            out = out.add(&a.scale(c));
        }
    }
    out
}

fn check_action_shape(base: &LieAlgebra, dim: usize, action: &[Matrix]) -> Result<()> {
    if action.len() != base.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} action matrices for a base of dimension {}",
            action.len(),
            base.dim()
        )));
    }
    if let Some(a) = action.iter().find(|a| a.rows() != dim || a.cols() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "action matrix is {}x{}, module dimension is {dim}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

impl TModule {
    pub fn new(base: LieAlgebra, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        check_action_shape(&base, dim, &action)?;
        if let Some((i, j, defect)) = flatness_defect(&base, &action) {
            return Err(Error::NotFlat { i, j, defect });
        }
        Ok(Self { base, dim, action })
    }

    pub fn trivial(base: LieAlgebra, dim: usize) -> Self {
        let action = vec![Matrix::zeros(dim, dim); base.dim()];
        Self { base, dim, action }
    }

    pub fn base(&self) -> &LieAlgebra {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    pub fn direct_sum(&self, other: &TModule) -> Result<TModule> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| Matrix::block_diag(a, b))
            .collect();
        TModule::new(self.base.clone(), self.dim + other.dim, action)
    }

    /// Checks that `iso: self -> target` is invertible and commutes with the actions.
    pub fn check_intertwining(&self, iso: &Matrix, target: &TModule) -> Result<()> {
        if self.base != target.base {
            return Err(Error::BaseMismatch);
        }
        if iso.rows() != target.dim || iso.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "map is {}x{}, modules have dimensions {} -> {}",
                iso.rows(),
                iso.cols(),
                self.dim,
                target.dim
            )));
        }
        for (index, (src, tgt)) in self.action.iter().zip(&target.action).enumerate() {
            let defect = iso.mul(src).sub(&tgt.mul(iso));
            if !defect.is_zero() {
                return Err(Error::NotIntertwining { index, defect });
            }
        }
        if iso.inverse().is_none() {
            return Err(Error::NotInvertible);
        }
        Ok(())
    }
}

/// An alternating k-linear map on the base with values in `Q^module_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    base_dim: usize,
    module_dim: usize,
    values: Vec<Vector>,
}

impl Cochain {
    pub fn zero(base_dim: usize, degree: usize, module_dim: usize) -> Self {
        Self {
            degree,
            base_dim,
            module_dim,
            values: vec![rational::zeros(module_dim); binomial(base_dim, degree)],
        }
    }

    /// `values[t]` is the value on the t-th increasing tuple.
    pub fn from_values(base_dim: usize, degree: usize, module_dim: usize, values: Vec<Vector>) -> Self {
        assert_eq!(
            values.len(),
            binomial(base_dim, degree),
            "one value per increasing tuple"
        );
        assert!(
            values.iter().all(|v| v.len() == module_dim),
            "values must have module_dim entries"
        );
        Self {
            degree,
            base_dim,
            module_dim,
            values,
        }
    }

    pub fn from_fn(base_dim: usize, degree: usize, module_dim: usize, mut f: impl FnMut(&[usize]) -> Vector) -> Self {
        let values = tuples(base_dim, degree).iter().map(|t| f(t)).collect();
        Self::from_values(base_dim, degree, module_dim, values)
    }

    /// Inverse of [`Cochain::to_flat`].
    pub fn from_flat(base_dim: usize, degree: usize, module_dim: usize, flat: &[Rational]) -> Self {
        let count = binomial(base_dim, degree);
        assert_eq!(flat.len(), count * module_dim);
        let values = (0..count)
            .map(|t| flat[t * module_dim..(t + 1) * module_dim].to_vec())
            .collect();
        Self::from_values(base_dim, degree, module_dim, values)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }

    pub fn tuples(&self) -> Vec<Vec<usize>> {
        tuples(self.base_dim, self.degree)
    }

    /// Tuple-major, module coordinate minor.
    pub fn to_flat(&self) -> Vector {
        self.values.iter().flatten().cloned().collect()
    }

    pub fn value(&self, increasing: &[usize]) -> &Vector {
        &self.values[tuple_index(self.base_dim, increasing)]
    }

    pub fn set(&mut self, increasing: &[usize], v: Vector) {
        assert_eq!(v.len(), self.module_dim);
        let idx = tuple_index(self.base_dim, increasing);
        self.values[idx] = v;
    }

    /// Value on an arbitrary tuple by alternating extension.
    pub fn eval(&self, tuple: &[usize]) -> Vector {
        assert_eq!(tuple.len(), self.degree);
        match sort_with_sign(tuple) {
            None => rational::zeros(self.module_dim),
            Some((t, false)) => self.value(&t).clone(),
            Some((t, true)) => self.value(&t).iter().map(|x| -x).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| rational::is_zero(v))
    }

    fn same_shape(&self, other: &Cochain) -> bool {
        (self.degree, self.base_dim, self.module_dim) == (other.degree, other.base_dim, other.module_dim)
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert!(self.same_shape(other), "cochains of different shapes");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| rational::add(a, b))
            .collect();
        Cochain { values, ..self.clone() }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Cochain {
        let values = self.values.iter().map(|v| rational::scale(s, v)).collect();
        Cochain { values, ..self.clone() }
    }

    /// Applies a linear map to every value.
    pub fn map_values(&self, map: &Matrix) -> Cochain {
        assert_eq!(map.cols(), self.module_dim);
        Cochain {
            degree: self.degree,
            base_dim: self.base_dim,
            module_dim: map.rows(),
            values: self.values.iter().map(|v| map.mul_vec(v)).collect(),
        }
    }
}

/// The differential for any family of action matrices (flat or not).
pub fn ce_differential_with_action(base: &LieAlgebra, action: &[Matrix], c: &Cochain) -> Result<Cochain> {
    let m = base.dim();
    let k = c.degree;
    if k > m {
        return Err(Error::DegreeOverflow { degree: k, base_dim: m });
    }
    if c.base_dim != m || action.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "cochain on a base of dimension {}, base has dimension {m}",
            c.base_dim
        )));
    }
    let d = c.module_dim;
    let out = Cochain::from_fn(m, k + 1, d, |t| {
        let mut acc = rational::zeros(d);
        for i in 0..=k {
            let rest: Vec<usize> = t.iter().enumerate().filter(|(p, _)| *p != i).map(|(_, &x)| x).collect();
            let term = action[t[i]].mul_vec(c.value(&rest));
            let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
            rational::axpy(&mut acc, &sign, &term);
        }
        for (i, j) in (0..=k).tuple_combinations() {
            let sign = if (i + j) % 2 == 0 {
                Rational::one()
            } else {
                -Rational::one()
            };
            let rest: Vec<usize> = t
                .iter()
                .enumerate()
                .filter(|(p, _)| *p != i && *p != j)
                .map(|(_, &x)| x)
                .collect();
            for (l, coeff) in base.basis_bracket(t[i], t[j]).iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let mut args = Vec::with_capacity(k);
                args.push(l);
                args.extend_from_slice(&rest);
                rational::axpy(&mut acc, &(&sign * coeff), &c.eval(&args));
            }
        }
        acc
    });
    Ok(out)
}

pub fn ce_differential(module: &TModule, c: &Cochain) -> Result<Cochain> {
    if c.module_dim != module.dim {
        return Err(Error::DimensionMismatch(format!(
            "cochain values have {} coordinates, module has dimension {}",
            c.module_dim, module.dim
        )));
    }
    ce_differential_with_action(&module.base, &module.action, c)
}

/// Matrix of `d_k : C^k -> C^{k+1}` in flat coordinates.
pub fn differential_matrix(module: &TModule, k: usize) -> Matrix {
    let m = module.base.dim();
    let d = module.dim;
    let rows = binomial(m, k + 1) * d;
    let cols = binomial(m, k) * d;
    if k > m || cols == 0 {
        return Matrix::zeros(rows, cols);
    }
    let columns: Vec<Vector> = (0..cols)
        .map(|c| {
            let basis = Cochain::from_flat(m, k, d, &rational::unit(cols, c));
            ce_differential(module, &basis).expect("degree checked").to_flat()
        })
        .collect();
    Matrix::from_columns(rows, &columns)
}

/// `H^k(T; module)` with a canonical coordinate system.
#[derive(Clone, Debug)]
pub struct Cohomology {
    module: TModule,
    degree: usize,
    cocycles: Subspace,
    coboundaries: Subspace,
    /// Quotient coordinates on the cocycle space (in cocycle-basis coordinates).
    quotient: QuotientCoordinates,
}

pub fn cohomology(module: &TModule, k: usize) -> Result<Cohomology> {
    if let Some((i, j, defect)) = flatness_defect(&module.base, &module.action) {
        return Err(Error::NotFlat { i, j, defect });
    }
    let m = module.base.dim();
    let cochain_dim = binomial(m, k) * module.dim;
    let cocycles = linalg::nullspace(&differential_matrix(module, k));
    let coboundaries = if k == 0 {
        Subspace::zero(cochain_dim)
    } else {
        Subspace::row_space(&differential_matrix(module, k - 1).transpose())
    };
    let relative = cocycles
        .relative(&coboundaries)
        .ok_or_else(|| Error::InternalCheckFailure("d∘d != 0 on a flat module".into()))?;
    let quotient = quotient_coordinates(cocycles.dim(), &relative);
    Ok(Cohomology {
        module: module.clone(),
        degree: k,
        cocycles,
        coboundaries,
        quotient,
    })
}

impl Cohomology {
    pub fn module(&self) -> &TModule {
        &self.module
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn betti(&self) -> usize {
        self.quotient.projection.rows()
    }

    pub fn cocycles(&self) -> &Subspace {
        &self.cocycles
    }

    pub fn coboundaries(&self) -> &Subspace {
        &self.coboundaries
    }

    fn check_shape(&self, c: &Cochain) -> Result<()> {
        let m = self.module.base.dim();
        if c.degree != self.degree || c.base_dim != m || c.module_dim != self.module.dim {
            return Err(Error::DimensionMismatch(format!(
                "cochain of degree {} on Q^{} with values in Q^{} does not belong to H^{} of this module",
                c.degree, c.base_dim, c.module_dim, self.degree
            )));
        }
        Ok(())
    }

    pub fn class_of(&self, cocycle: &Cochain) -> Result<CohomologyClass> {
        self.check_shape(cocycle)?;
        let coords = self.cocycles.coordinates(&cocycle.to_flat()).ok_or(Error::NotCocycle)?;
        Ok(CohomologyClass {
            degree: self.degree,
            module: self.module.clone(),
            coordinates: self.quotient.projection.mul_vec(&coords),
        })
    }

    pub fn zero_class(&self) -> CohomologyClass {
        CohomologyClass {
            degree: self.degree,
            module: self.module.clone(),
            coordinates: rational::zeros(self.betti()),
        }
    }

    /// Canonical representative cocycle of a class.
    pub fn representative(&self, class: &CohomologyClass) -> Result<Cochain> {
        if class.degree != self.degree || class.module != self.module {
            return Err(Error::ModuleMismatch);
        }
        let coords = self.quotient.section.mul_vec(&class.coordinates);
        let flat = self.cocycles.combination(&coords);
        Ok(Cochain::from_flat(
            self.module.base.dim(),
            self.degree,
            self.module.dim,
            &flat,
        ))
    }

    /// A cochain `x` of one degree lower with `dx = c`, or `None` if `c` is
    /// not a coboundary. The pivot solution is returned.
    pub fn primitive(&self, c: &Cochain) -> Result<Option<Cochain>> {
        self.check_shape(c)?;
        if self.degree == 0 {
            return Ok(c
                .is_zero()
                .then(|| Cochain::zero(self.module.base.dim(), 0, self.module.dim)));
        }
        let d = differential_matrix(&self.module, self.degree - 1);
        Ok(linalg::solve(&d, &c.to_flat())
            .map(|x| Cochain::from_flat(self.module.base.dim(), self.degree - 1, self.module.dim, &x)))
    }
}

pub fn class_of(module: &TModule, cocycle: &Cochain) -> Result<CohomologyClass> {
    cohomology(module, cocycle.degree)?.class_of(cocycle)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    degree: usize,
    module: TModule,
    coordinates: Vector,
}

impl CohomologyClass {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn module(&self) -> &TModule {
        &self.module
    }

    pub fn coordinates(&self) -> &Vector {
        &self.coordinates
    }

    pub fn is_zero(&self) -> bool {
        rational::is_zero(&self.coordinates)
    }

    fn check_compatible(&self, other: &CohomologyClass) -> Result<()> {
        if self.degree != other.degree || self.module != other.module {
            return Err(Error::ModuleMismatch);
        }
        Ok(())
    }

    /// `a * self + b * other`
    pub fn linear_combination(&self, a: &Rational, other: &CohomologyClass, b: &Rational) -> Result<CohomologyClass> {
        self.check_compatible(other)?;
        let coordinates = rational::add(
            &rational::scale(a, &self.coordinates),
            &rational::scale(b, &other.coordinates),
        );
        Ok(CohomologyClass {
            coordinates,
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &Rational) -> CohomologyClass {
        CohomologyClass {
            coordinates: rational::scale(s, &self.coordinates),
            ..self.clone()
        }
    }
}

pub fn classes_equal(a: &CohomologyClass, b: &CohomologyClass) -> Result<bool> {
    a.check_compatible(b)?;
    Ok(a.coordinates == b.coordinates)
}

/// Applies an intertwining isomorphism valuewise.
pub fn pushforward_cochain(iso: &Matrix, source: &TModule, c: &Cochain, target: &TModule) -> Result<Cochain> {
    source.check_intertwining(iso, target)?;
    if c.module_dim != source.dim {
        return Err(Error::DimensionMismatch(
            "cochain is not valued in the source module".into(),
        ));
    }
    Ok(c.map_values(iso))
}

/// Transports a class along an intertwining isomorphism of its module.
pub fn pushforward_class(iso: &Matrix, class: &CohomologyClass, target: &TModule) -> Result<CohomologyClass> {
    class.module.check_intertwining(iso, target)?;
    let rep = cohomology(&class.module, class.degree)?.representative(class)?;
    cohomology(target, class.degree)?.class_of(&rep.map_values(iso))
}
