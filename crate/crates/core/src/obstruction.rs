//! Couplings, their lifts, and the obstruction class in `H^3(T; Z(g))`.
//!
//! Pipeline: a coupling `Ξ: T -> Out(g)` is given by derivation
//! representatives. Those representatives are the default connection `∇`.
//! Its curvature `R(X,Y) = [∇X, ∇Y] - ∇[X,Y]` is inner, so it lifts through
//! `ad` to a g-valued 2-cochain `Ω`. Then `d^∇ Ω` is central and its class in
//! the cohomology of `T` with coefficients in the center is the obstruction.

use itertools::Itertools;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ce::{self, ce_differential, ce_differential_with_action, Cochain, CohomologyClass, TModule};
use crate::derivations::{flatten, DerivationSpaces};
use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, LieHom};
use crate::linalg::{self, Subspace};
use crate::matrix::Matrix;
use crate::rational::{self, ratio, Rational, Vector};

/// A validated coupling between a base algebra and a fiber algebra.
#[derive(Clone, Debug)]
pub struct Coupling {
    base: LieAlgebra,
    fiber: LieAlgebra,
    spaces: DerivationSpaces,
    xi_reps: Vec<Matrix>,
    center: Subspace,
    center_module: TModule,
}

/// `sum_l coeffs[l] * mats[l]`
fn combination(mats: &[Matrix], coeffs: &[Rational], n: usize) -> Matrix {
    mats.iter()
        .zip(coeffs)
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .fold(Matrix::zeros(n, n), |acc, (m, c)| acc.add(&m.scale(c)))
}

/// Checks that `reps` are derivations bracketing like the base modulo inner
/// derivations.
pub fn validate_coupling(base: LieAlgebra, fiber: LieAlgebra, xi_reps: Vec<Matrix>) -> Result<Coupling> {
    let base = base.validated()?;
    let spaces = DerivationSpaces::new(&fiber)?;
    let n = fiber.dim();
    let m = base.dim();
    if xi_reps.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{} representatives for a base of dimension {m}",
            xi_reps.len()
        )));
    }
    if xi_reps.iter().any(|d| d.rows() != n || d.cols() != n) {
        return Err(Error::DimensionMismatch(format!("representatives must be {n}x{n}")));
    }
    if let Some(index) = xi_reps.iter().position(|d| !spaces.is_derivation(d)) {
        return Err(Error::NotDerivation { index });
    }
    for (i, j) in (0..m).tuple_combinations() {
        let defect = xi_reps[i]
            .commutator(&xi_reps[j])
            .sub(&combination(&xi_reps, base.basis_bracket(i, j), n));
        if !spaces.is_inner(&defect) {
            let outer_defect = spaces
                .outer_class(&defect)
                .expect("commutators of derivations are derivations");
            return Err(Error::NotCouplingHomomorphism {
                i,
                j,
                defect,
                outer_defect,
            });
        }
    }
    let center = fiber.center();
    let center_module = center_action(&base, &spaces, &center, &xi_reps)?;
    Ok(Coupling {
        base,
        fiber,
        spaces,
        xi_reps,
        center,
        center_module,
    })
}

/// Restriction of the representatives to the center, in the center's
/// canonical basis.
fn center_action(base: &LieAlgebra, spaces: &DerivationSpaces, center: &Subspace, reps: &[Matrix]) -> Result<TModule> {
    let n = spaces.algebra().dim();
    let d = center.dim();
    let restrict = |m: &Matrix| -> Result<Matrix> {
        let cols = center
            .basis_vectors()
            .iter()
            .map(|z| center.coordinates(&m.mul_vec(z)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InternalCheckFailure("a derivation moved the center".into()))?;
        Ok(Matrix::from_columns(d, &cols))
    };
    // The restriction only depends on the outer class: inner derivations kill the center.
    for b in spaces.inn().basis_vectors() {
        if !restrict(&crate::derivations::unflatten(n, &b))?.is_zero() {
            return Err(Error::InternalCheckFailure(
                "an inner derivation acts on the center".into(),
            ));
        }
    }
    let action = reps.iter().map(restrict).collect::<Result<Vec<_>>>()?;
    TModule::new(base.clone(), d, action).map_err(|e| match e {
        Error::NotFlat { i, j, .. } => {
            Error::InternalCheckFailure(format!("induced action on the center is not flat on ({i}, {j})"))
        }
        other => other,
    })
}

impl Coupling {
    pub fn base(&self) -> &LieAlgebra {
        &self.base
    }

    pub fn fiber(&self) -> &LieAlgebra {
        &self.fiber
    }

    pub fn spaces(&self) -> &DerivationSpaces {
        &self.spaces
    }

    pub fn xi_reps(&self) -> &[Matrix] {
        &self.xi_reps
    }

    pub fn center(&self) -> &Subspace {
        &self.center
    }

    /// `n x d` matrix whose columns are the canonical center basis.
    pub fn center_inclusion(&self) -> Matrix {
        Matrix::from_columns(self.fiber.dim(), &self.center.basis_vectors())
    }

    /// The center with the flat action induced by the coupling.
    pub fn center_module(&self) -> &TModule {
        &self.center_module
    }

    /// `Ξ(X_i)` in `Out` coordinates.
    pub fn outer_values(&self) -> Vec<Vector> {
        self.xi_reps
            .iter()
            .map(|d| self.spaces.outer_class(d).expect("validated derivation"))
            .collect()
    }
}

pub fn induced_center_module(c: &Coupling) -> &TModule {
    c.center_module()
}

/// A choice of connection lifting the coupling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionLift {
    pub nabla: Vec<Matrix>,
}

/// The default lift: the representatives themselves.
pub fn lift_connection(c: &Coupling) -> ConnectionLift {
    ConnectionLift {
        nabla: c.xi_reps.clone(),
    }
}

/// Default lift plus inner derivations `shifts[i]`.
pub fn lift_connection_shifted(c: &Coupling, shifts: &[Matrix]) -> Result<ConnectionLift> {
    if shifts.len() != c.base.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} shifts for a base of dimension {}",
            shifts.len(),
            c.base.dim()
        )));
    }
    let n = c.fiber.dim();
    let mut nabla = Vec::with_capacity(shifts.len());
    for (index, (rep, s)) in c.xi_reps.iter().zip(shifts).enumerate() {
        if s.rows() != n || s.cols() != n || !c.spaces.is_inner(s) {
            return Err(Error::NotInner { index });
        }
        nabla.push(rep.add(s));
    }
    Ok(ConnectionLift { nabla })
}

/// `R(X_i, X_j) = [∇_i, ∇_j] - ∇_{[X_i, X_j]}` as a matrix.
pub fn curvature_matrix(c: &Coupling, l: &ConnectionLift, i: usize, j: usize) -> Matrix {
    let n = c.fiber.dim();
    l.nabla[i]
        .commutator(&l.nabla[j])
        .sub(&combination(&l.nabla, c.base.basis_bracket(i, j), n))
}

/// Curvature 2-cochain with values in `Der(g)` coordinates.
pub fn curvature(c: &Coupling, l: &ConnectionLift) -> Result<Cochain> {
    let m = c.base.dim();
    let k = c.spaces.der().dim();
    let mut out = Cochain::zero(m, 2, k);
    for (i, j) in (0..m).tuple_combinations() {
        let r = curvature_matrix(c, l, i, j);
        if !c.spaces.is_inner(&r) {
            return Err(Error::CurvatureNotInner { i, j });
        }
        let coords = c.spaces.der_coordinates(&r).ok_or(Error::CurvatureNotInner { i, j })?;
        out.set(&[i, j], coords);
    }
    Ok(out)
}

/// A connection together with a g-valued 2-cochain `Ω` with `ad ∘ Ω = R^∇`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaLift {
    pub lift: ConnectionLift,
    pub omega: Cochain,
}

/// Columns are `vec(ad e_l)`.
fn ad_system(g: &LieAlgebra) -> Matrix {
    let cols: Vec<Vector> = (0..g.dim()).map(|l| flatten(&g.ad_basis(l))).collect();
    Matrix::from_columns(g.dim() * g.dim(), &cols)
}

/// `Ω(X_i, X_j)` is the pivot solution of `ad(u) = R(X_i, X_j)`.
pub fn lift_omega(c: &Coupling, l: &ConnectionLift) -> Result<OmegaLift> {
    let m = c.base.dim();
    let n = c.fiber.dim();
    let curv = curvature(c, l)?;
    let system = ad_system(&c.fiber);
    let mut omega = Cochain::zero(m, 2, n);
    for (i, j) in (0..m).tuple_combinations() {
        let r = c.spaces.der_matrix(curv.value(&[i, j]));
        let u = linalg::solve(&system, &flatten(&r)).ok_or(Error::NoPreimage { i, j })?;
        omega.set(&[i, j], u);
    }
    Ok(OmegaLift { lift: l.clone(), omega })
}

/// Default `Ω` plus a 2-cochain valued in the center (given in center coordinates).
pub fn lift_omega_shifted(c: &Coupling, l: &ConnectionLift, shift: &Cochain) -> Result<OmegaLift> {
    let m = c.base.dim();
    if shift.degree() != 2 || shift.base_dim() != m || shift.module_dim() != c.center.dim() {
        return Err(Error::DimensionMismatch(
            "omega shift must be a 2-cochain in center coordinates".into(),
        ));
    }
    let mut o = lift_omega(c, l)?;
    o.omega = o.omega.add(&shift.map_values(&c.center_inclusion()));
    Ok(o)
}

/// `d^∇ Ω` (g-valued) and `U = i^{-1}(d^∇ Ω)` (center coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionCocycle {
    pub d_omega: Cochain,
    pub cocycle: Cochain,
}

/// `d^∇ Ω` using the (generally non-flat) action of `∇` on g.
pub fn nabla_differential(c: &Coupling, o: &OmegaLift) -> Result<Cochain> {
    let m = c.base.dim();
    if m < 2 {
        return Ok(Cochain::zero(m, 3, c.fiber.dim()));
    }
    ce_differential_with_action(&c.base, &o.lift.nabla, &o.omega)
}

pub fn obstruction_cocycle(c: &Coupling, o: &OmegaLift) -> Result<ObstructionCocycle> {
    let m = c.base.dim();
    let d_omega = nabla_differential(c, o)?;
    let mut values = Vec::with_capacity(d_omega.values().len());
    for (tuple, v) in ce::tuples(m, 3).into_iter().zip(d_omega.values()) {
        values.push(c.center.coordinates(v).ok_or(Error::CocycleNotCentral { tuple })?);
    }
    let cocycle = Cochain::from_values(m, 3, c.center.dim(), values);
    if m >= 3 && !ce_differential(&c.center_module, &cocycle)?.is_zero() {
        return Err(Error::NotClosed);
    }
    Ok(ObstructionCocycle { d_omega, cocycle })
}

#[derive(Clone, Debug)]
pub struct ObstructionResult {
    pub cocycle: Cochain,
    pub zmodule: TModule,
    pub class: CohomologyClass,
    pub betti3: usize,
    pub trivial: bool,
}

/// Obstruction class for an explicit choice of `(∇, Ω)`.
pub fn obstruction_class_with(c: &Coupling, o: &OmegaLift) -> Result<ObstructionResult> {
    let oc = obstruction_cocycle(c, o)?;
    let h3 = ce::cohomology(&c.center_module, 3)?;
    let class = h3.class_of(&oc.cocycle).map_err(|e| match e {
        Error::NotCocycle => Error::NotClosed,
        other => other,
    })?;
    Ok(ObstructionResult {
        cocycle: oc.cocycle,
        zmodule: c.center_module.clone(),
        trivial: class.is_zero(),
        betti3: h3.betti(),
        class,
    })
}

pub fn obstruction_class(c: &Coupling) -> Result<ObstructionResult> {
    let lift = lift_connection(c);
    let o = lift_omega(c, &lift)?;
    obstruction_class_with(c, &o)
}

/// Both sides of the Bianchi identity in `Der` coordinates:
/// `d^{∇,der} R^∇` and `ad ∘ d^∇ Ω`.
pub fn bianchi_sides(c: &Coupling, o: &OmegaLift) -> Result<(Cochain, Cochain)> {
    let m = c.base.dim();
    let k = c.spaces.der().dim();
    let curv = curvature(c, &o.lift)?;
    let lhs = if m < 2 {
        Cochain::zero(m, 3, k)
    } else {
        let action = o
            .lift
            .nabla
            .iter()
            .map(|d| c.spaces.der_action(d))
            .collect::<Result<Vec<_>>>()?;
        ce_differential_with_action(&c.base, &action, &curv)?
    };
    let rhs = nabla_differential(c, o)?.map_values(&c.spaces.ad_map());
    Ok((lhs, rhs))
}

/// Pseudo-random shifts for one independence trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceShift {
    /// `u_i` with `∇_i -> ∇_i + ad(u_i)`.
    pub nabla_shift: Vec<Vector>,
    /// Center-valued 2-cochain added to `Ω`, in center coordinates.
    pub omega_shift: Cochain,
}

/// Small random rational: numerator in `-5..=5`, denominator in `1..=3`.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    ratio(rng.random_range(-5..=5), rng.random_range(1..=3))
}

/// Deterministic RNG for trial `trial` under `seed`: ChaCha8 seeded with
/// `seed`, stream `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn random_shift(c: &Coupling, seed: u64, trial: u64) -> ChoiceShift {
    let mut rng = trial_rng(seed, trial);
    let n = c.fiber.dim();
    let m = c.base.dim();
    let d = c.center.dim();
    let nabla_shift = (0..m)
        .map(|_| (0..n).map(|_| small_rational(&mut rng)).collect())
        .collect();
    let omega_shift = Cochain::from_fn(m, 2, d, |_| (0..d).map(|_| small_rational(&mut rng)).collect());
    ChoiceShift {
        nabla_shift,
        omega_shift,
    }
}

/// Obstruction class computed from the default choices moved by `shift`.
pub fn shifted_class(c: &Coupling, shift: &ChoiceShift) -> Result<CohomologyClass> {
    let ads: Vec<Matrix> = shift.nabla_shift.iter().map(|u| c.fiber.ad_matrix(u)).collect();
    let lift = lift_connection_shifted(c, &ads)?;
    let o = lift_omega_shifted(c, &lift, &shift.omega_shift)?;
    Ok(obstruction_class_with(c, &o)?.class)
}

#[derive(Clone, Debug)]
pub struct IndependenceReport {
    pub default_class: CohomologyClass,
    /// One class per trial, in trial order.
    pub trial_classes: Vec<CohomologyClass>,
}

impl IndependenceReport {
    pub fn all_equal(&self) -> bool {
        self.trial_classes.iter().all(|c| c == &self.default_class)
    }
}

/// Recomputes the class under `trials` seeded re-choices of `(∇, Ω)` and
/// fails with `IndependenceViolation` if any differs from the default.
pub fn verify_independence(c: &Coupling, trials: usize, seed: u64) -> Result<IndependenceReport> {
    let default_class = obstruction_class(c)?.class;
    let results: Vec<(ChoiceShift, CohomologyClass)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let shift = random_shift(c, seed, t as u64);
            shifted_class(c, &shift).map(|class| (shift, class))
        })
        .collect::<Result<_>>()?;
    for (trial, (shift, class)) in results.iter().enumerate() {
        if class != &default_class {
            return Err(Error::IndependenceViolation {
                trial,
                nabla_shift: shift.nabla_shift.clone(),
                omega_shift: shift.omega_shift.values().to_vec(),
                default_class: default_class.coordinates().clone(),
                trial_class: class.coordinates().clone(),
            });
        }
    }
    Ok(IndependenceReport {
        default_class,
        trial_classes: results.into_iter().map(|(_, c)| c).collect(),
    })
}

/// The algebra `E = T ⊕ g` realizing a coupling with vanishing obstruction.
#[derive(Clone, Debug)]
pub struct ExtensionResult {
    pub total: LieAlgebra,
    pub anchor: LieHom,
    pub kernel_inclusion: LieHom,
    /// The corrected 2-cochain `Ω'` with `d^∇ Ω' = 0`.
    pub omega: Cochain,
}

/// Brackets on `T ⊕ g` (base first):
/// `[(X,u),(Y,v)] = ([X,Y], ∇_X v - ∇_Y u + [u,v] + Ω(X,Y))`.
pub fn extension_algebra(c: &Coupling, nabla: &[Matrix], omega: &Cochain) -> Result<LieAlgebra> {
    let m = c.base.dim();
    let n = c.fiber.dim();
    let mut brackets = Vec::new();
    for (a, b) in (0..m + n).tuple_combinations() {
        let mut v = rational::zeros(m + n);
        if b < m {
            v[..m].clone_from_slice(c.base.basis_bracket(a, b));
            v[m..].clone_from_slice(omega.value(&[a, b]));
        } else if a < m {
            v[m..].clone_from_slice(&nabla[a].column(b - m));
        } else {
            v[m..].clone_from_slice(c.fiber.basis_bracket(a - m, b - m));
        }
        brackets.push((a, b, v));
    }
    let names = c.base.names().iter().chain(c.fiber.names()).cloned().collect();
    LieAlgebra::new(names, brackets)
}

pub fn construct_extension(c: &Coupling) -> Result<Option<ExtensionResult>> {
    let m = c.base.dim();
    let n = c.fiber.dim();
    let lift = lift_connection(c);
    let o = lift_omega(c, &lift)?;
    let res = obstruction_class_with(c, &o)?;
    if !res.trivial {
        return Ok(None);
    }
    let correction = if m >= 3 {
        let h3 = ce::cohomology(&c.center_module, 3)?;
        h3.primitive(&res.cocycle.scale(&-Rational::one()))?
            .ok_or_else(|| Error::InternalCheckFailure("trivial class without a primitive".into()))?
    } else {
        Cochain::zero(m, 2, c.center.dim())
    };
    let omega = o.omega.add(&correction.map_values(&c.center_inclusion()));
    let corrected = OmegaLift {
        lift: lift.clone(),
        omega: omega.clone(),
    };
    if !nabla_differential(c, &corrected)?.is_zero() {
        return Err(Error::InternalCheckFailure("corrected Ω is not d^∇-closed".into()));
    }

    let total = extension_algebra(c, &lift.nabla, &omega)?;
    if let Some(v) = total.validate().violations.first() {
        return Err(match v {
            crate::lie::Violation::Jacobi { i, j, k, .. } => Error::JacobiFailure { i: *i, j: *j, k: *k },
            crate::lie::Violation::Antisymmetry { i, j, .. } => Error::JacobiFailure { i: *i, j: *j, k: *j },
        });
    }
    let internal = |e: Error| Error::InternalCheckFailure(format!("Atiyah sequence maps: {e}"));
    let anchor_matrix = Matrix::hstack(&Matrix::identity(m), &Matrix::zeros(m, n));
    let anchor = LieHom::new(total.clone(), c.base.clone(), anchor_matrix).map_err(internal)?;
    let incl_matrix = Matrix::vstack(n, &[Matrix::zeros(m, n), Matrix::identity(n)]);
    let kernel_inclusion = LieHom::new(c.fiber.clone(), total.clone(), incl_matrix).map_err(internal)?;
    if anchor.image() != Subspace::full(m)
        || anchor.kernel() != kernel_inclusion.image()
        || kernel_inclusion.kernel().dim() != 0
    {
        return Err(Error::InternalCheckFailure("Atiyah sequence is not exact".into()));
    }
    Ok(Some(ExtensionResult {
        total,
        anchor,
        kernel_inclusion,
        omega,
    }))
}
