//! Couplings with an identified center, their universal obstruction, and the
//! linear combination of two such elements.
//!
//! A [`CoupElement`] is a coupling together with an isomorphism `phi` from
//! the center of its fiber onto a fixed reference module `𝒵`, compatible with
//! the actions. Its universal obstruction is `phi_*` of the obstruction class.
//! [`combine`] realizes `α·uobs(c₁) + β·uobs(c₂)` by a single element built on
//! `(L₁ ⊕ L₂) / ψ(Z₀)`.

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::ce::{self, CohomologyClass, TModule};
use crate::error::{Error, Result};
use crate::linalg::{self, Subspace};
use crate::matrix::Matrix;
use crate::obstruction::{obstruction_class, trial_rng, validate_coupling, Coupling};
use crate::rational::{ratio, Rational, Vector};

#[derive(Clone, Debug)]
pub struct CoupElement {
    coupling: Coupling,
    reference: TModule,
    phi: Matrix,
}

pub fn make_element(coupling: Coupling, reference: TModule, phi: Matrix) -> Result<CoupElement> {
    coupling.center_module().check_intertwining(&phi, &reference)?;
    Ok(CoupElement {
        coupling,
        reference,
        phi,
    })
}

impl CoupElement {
    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    pub fn reference(&self) -> &TModule {
        &self.reference
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }
}

/// The abelian element on `𝒵` itself: fiber `𝒵` with zero bracket, the
/// action as coupling, and `phi = I`. Its universal obstruction is zero.
pub fn unit_element(reference: &TModule) -> Result<CoupElement> {
    let fiber = crate::lie::LieAlgebra::abelian(reference.dim());
    let coupling = validate_coupling(reference.base().clone(), fiber, reference.action().to_vec())?;
    make_element(coupling, reference.clone(), Matrix::identity(reference.dim()))
}

/// `phi_*` of the obstruction class, in `H^3(T; 𝒵)`.
pub fn uobs(e: &CoupElement) -> Result<CohomologyClass> {
    let class = obstruction_class(&e.coupling)?.class;
    ce::pushforward_class(&e.phi, &class, &e.reference)
}

/// The blockwise coupling on `L₁ ⊕ L₂`.
fn sum_coupling(c1: &Coupling, c2: &Coupling) -> Result<Coupling> {
    let fiber = c1.fiber().direct_sum(c2.fiber());
    let reps = c1
        .xi_reps()
        .iter()
        .zip(c2.xi_reps())
        .map(|(a, b)| Matrix::block_diag(a, b))
        .collect();
    validate_coupling(c1.base().clone(), fiber, reps).map_err(|e| internal("direct sum coupling", e))
}

/// `center(L₁ ⊕ L₂)` coordinates to `(ZL₁, ZL₂)` coordinates.
fn split_center(sum: &Coupling, c1: &Coupling, c2: &Coupling) -> Result<Matrix> {
    let n1 = c1.fiber().dim();
    let cols = sum
        .center()
        .basis_vectors()
        .iter()
        .map(|z| {
            let a = c1.center().coordinates(&z[..n1])?;
            let b = c2.center().coordinates(&z[n1..])?;
            Some(a.into_iter().chain(b).collect::<Vector>())
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InternalCheckFailure("center of a direct sum is not the sum of centers".into()))?;
    Ok(Matrix::from_columns(c1.center().dim() + c2.center().dim(), &cols))
}

fn internal(stage: &str, e: Error) -> Error {
    if e.is_internal() {
        e
    } else {
        Error::InternalCheckFailure(format!("{stage}: {e}"))
    }
}

fn check_compatible(c1: &CoupElement, c2: &CoupElement) -> Result<()> {
    if c1.coupling.base() != c2.coupling.base() {
        return Err(Error::BaseMismatch);
    }
    if c1.reference != c2.reference {
        return Err(Error::ReferenceMismatch);
    }
    Ok(())
}

/// `(L₁ ⊕ L₂, Ξ₁ ⊕ Ξ₂, φ₁ ⊕ φ₂)` with reference `𝒵 ⊕ 𝒵`.
pub fn direct_sum_element(c1: &CoupElement, c2: &CoupElement) -> Result<CoupElement> {
    if c1.coupling.base() != c2.coupling.base() {
        return Err(Error::BaseMismatch);
    }
    let sum = sum_coupling(&c1.coupling, &c2.coupling)?;
    let phi = Matrix::block_diag(&c1.phi, &c2.phi).mul(&split_center(&sum, &c1.coupling, &c2.coupling)?);
    let reference = c1.reference.direct_sum(&c2.reference)?;
    make_element(sum, reference, phi).map_err(|e| internal("direct sum element", e))
}

/// Component `block` (0 or 1) of a class in `H^k(T; 𝒵₁ ⊕ 𝒵₂)`, as a class in
/// `H^k(T; target)` where `target` is the corresponding summand.
pub fn project_class(class: &CohomologyClass, block: usize, target: &TModule) -> Result<CohomologyClass> {
    let total = class.module().dim();
    let d = target.dim();
    let offset = if block == 0 { 0 } else { total - d };
    let mut proj = Matrix::zeros(d, total);
    for i in 0..d {
        proj[(i, offset + i)] = Rational::one();
    }
    let rep = ce::cohomology(class.module(), class.degree())?.representative(class)?;
    ce::class_of(target, &rep.map_values(&proj))
}

/// Intermediate objects of [`combine`], kept for auditing.
#[derive(Clone, Debug)]
pub struct CombineAudit {
    /// Basis of `Z₀ = ker θ ⊂ 𝒵 ⊕ 𝒵`.
    pub z0_basis: Vec<Vector>,
    /// `ψ(Z₀)` inside `L₁ ⊕ L₂`.
    pub psi_image: Subspace,
    /// Quotient map `L₁ ⊕ L₂ -> L₃`.
    pub projection: Matrix,
    pub class1: CohomologyClass,
    pub class2: CohomologyClass,
    pub class3: CohomologyClass,
}

#[derive(Clone, Debug)]
pub struct CombineResult {
    pub element: CoupElement,
    pub audit: CombineAudit,
}

/// Builds `c₃` with `uobs(c₃) = α·uobs(c₁) + β·uobs(c₂)` and checks that identity.
pub fn combine(c1: &CoupElement, c2: &CoupElement, alpha: &Rational, beta: &Rational) -> Result<CombineResult> {
    if alpha.is_zero() && beta.is_zero() {
        return Err(Error::ScalarsBothZero);
    }
    check_compatible(c1, c2)?;
    let reference = &c1.reference;
    let d = reference.dim();
    let sum = sum_coupling(&c1.coupling, &c2.coupling)?;

    // θ(u, v) = αu + βv
    let theta = Matrix::hstack(&Matrix::scalar(d, alpha), &Matrix::scalar(d, beta));
    let z0 = linalg::nullspace(&theta);

    // ψ = (i₁ ⊕ i₂) ∘ (φ₁ ⊕ φ₂)⁻¹ on Z₀
    let phi_inv = Matrix::block_diag(&c1.phi, &c2.phi)
        .inverse()
        .ok_or_else(|| Error::InternalCheckFailure("validated phi is singular".into()))?;
    let embed = Matrix::block_diag(&c1.coupling.center_inclusion(), &c2.coupling.center_inclusion());
    let psi = embed.mul(&phi_inv);
    let psi_image = z0.image_under(&psi);
    if let Some(index) = (0..psi_image.dim()).find(|&i| !sum.fiber().is_central(&psi_image.basis_vector(i))) {
        return Err(Error::InternalCheckFailure(format!(
            "ψ(Z₀) basis vector {index} is not central"
        )));
    }
    for (index, rep) in sum.xi_reps().iter().enumerate() {
        let moved = psi_image.image_under(rep);
        if !psi_image.contains_subspace(&moved) {
            return Err(Error::SubspaceNotPreserved { index });
        }
    }

    let q = sum
        .fiber()
        .quotient_by_central_subspace(&psi_image)
        .map_err(|e| internal("central quotient", e))?;
    let p = q.projection.matrix().clone();
    let reps3: Vec<Matrix> = sum.xi_reps().iter().map(|rep| p.mul(rep).mul(&q.section)).collect();
    let fiber3 = q.algebra.clone();
    let center3 = fiber3.center();
    if center3.dim() != d {
        return Err(Error::CenterGrew {
            center_dim: center3.dim(),
            expected: d,
        });
    }

    // φ₃ = θ ∘ (φ₁ ⊕ φ₂) on (ZL₁ ⊕ ZL₂) / ψ(Z₀)
    let to_l3 = p.mul(&embed);
    let to_ref = theta.mul(&Matrix::block_diag(&c1.phi, &c2.phi));
    let cols = center3
        .basis_vectors()
        .iter()
        .map(|y| linalg::solve(&to_l3, y).map(|w| to_ref.mul_vec(&w)))
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::CenterGrew {
            center_dim: center3.dim(),
            expected: d,
        })?;
    let phi3 = Matrix::from_columns(d, &cols);

    let coupling3 =
        validate_coupling(sum.base().clone(), fiber3, reps3).map_err(|e| internal("induced coupling", e))?;
    let element = make_element(coupling3, reference.clone(), phi3).map_err(|e| internal("induced element", e))?;

    let class1 = uobs(c1)?;
    let class2 = uobs(c2)?;
    let class3 = uobs(&element)?;
    let expected = class1.linear_combination(alpha, &class2, beta)?;
    if class3 != expected {
        return Err(Error::LinearityViolation {
            class1: class1.coordinates().clone(),
            class2: class2.coordinates().clone(),
            class3: class3.coordinates().clone(),
            expected: expected.coordinates().clone(),
        });
    }
    Ok(CombineResult {
        element,
        audit: CombineAudit {
            z0_basis: z0.basis_vectors(),
            psi_image,
            projection: p,
            class1,
            class2,
            class3,
        },
    })
}

#[derive(Debug)]
pub struct LinearitySample {
    pub alpha: Rational,
    pub beta: Rational,
    pub outcome: std::result::Result<CombineAudit, Error>,
}

#[derive(Debug)]
pub struct LinearityReport {
    pub samples: Vec<LinearitySample>,
}

impl LinearityReport {
    pub fn pass(&self) -> bool {
        self.samples.iter().all(|s| s.outcome.is_ok())
    }
}

/// Runs [`combine`] on every `(α, β)` and collects the outcomes in order.
pub fn verify_linearity(c1: &CoupElement, c2: &CoupElement, samples: &[(Rational, Rational)]) -> LinearityReport {
    let samples = samples
        .par_iter()
        .map(|(alpha, beta)| LinearitySample {
            alpha: alpha.clone(),
            beta: beta.clone(),
            outcome: combine(c1, c2, alpha, beta).map(|r| r.audit),
        })
        .collect();
    LinearityReport { samples }
}

/// `count` reproducible scalar pairs with nonzero numerators in `-5..=5` and
/// denominators in `1..=3`.
pub fn random_scalar_pairs(seed: u64, count: usize) -> Vec<(Rational, Rational)> {
    (0..count)
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let mut draw = || {
                let p = loop {
                    let p: i64 = rng.random_range(-5..=5);
                    if p != 0 {
                        break p;
                    }
                };
                ratio(p, rng.random_range(1..=3))
            };
            let a = draw();
            (a, draw())
        })
        .collect()
}
