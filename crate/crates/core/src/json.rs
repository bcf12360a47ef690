//! JSON schemas for algebras, modules, couplings and elements, and the report
//! objects emitted by the command-line tool.
//!
//! Rationals are strings `"p/q"` or `"p"`. Reports are built as
//! [`serde_json::Value`] maps, whose keys serialize in sorted order.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ce::{Cochain, CohomologyClass, TModule};
use crate::coup::{self, CoupElement};
use crate::derivations::DerivationSpaces;
use crate::error::{Error, Result};
use crate::lie::{default_names, LieAlgebra};
use crate::matrix::Matrix;
use crate::obstruction::{self, Coupling, ExtensionResult, IndependenceReport, ObstructionResult};
use crate::rational::{format_rational, format_vector, parse_rational, zeros, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub k: usize,
    pub v: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieAlgebraJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    pub brackets: Vec<BracketJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseJson {
    Abelian { abelian: usize },
    Algebra(LieAlgebraJson),
}

pub type MatrixJson = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TModuleJson {
    pub base: BaseJson,
    pub module_dim: usize,
    pub action: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingJson {
    pub base: BaseJson,
    pub fiber: LieAlgebraJson,
    pub xi: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupElementJson {
    pub coupling: CouplingJson,
    pub reference: TModuleJson,
    pub phi: MatrixJson,
}

impl LieAlgebraJson {
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        let n = self.dim;
        let names = match &self.basis {
            Some(b) if b.len() != n => {
                return Err(Error::DimensionMismatch(format!(
                    "{} basis names for dimension {n}",
                    b.len()
                )));
            }
            Some(b) => b.clone(),
            None => default_names("e", n),
        };
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            let mut v = zeros(n);
            let mut seen = BTreeSet::new();
            for t in &b.terms {
                if t.k >= n {
                    return Err(Error::DimensionMismatch(format!("term index {} in dimension {n}", t.k)));
                }
                if !seen.insert(t.k) {
                    return Err(Error::Parse(format!(
                        "repeated term k={} in bracket ({}, {})",
                        t.k, b.i, b.j
                    )));
                }
                v[t.k] = parse_rational(&t.v)?;
            }
            brackets.push((b.i, b.j, v));
        }
        LieAlgebra::new(names, brackets)
    }

    pub fn from_algebra(g: &LieAlgebra) -> Self {
        let brackets = g
            .brackets()
            .iter()
            .map(|(i, j, v)| BracketJson {
                i: *i,
                j: *j,
                terms: v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                    .map(|(k, c)| TermJson {
                        k,
                        v: format_rational(c),
                    })
                    .collect(),
            })
            .collect();
        Self {
            dim: g.dim(),
            basis: Some(g.names().to_vec()),
            brackets,
        }
    }
}

impl BaseJson {
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        match self {
            BaseJson::Abelian { abelian } => Ok(LieAlgebra::abelian(*abelian)),
            BaseJson::Algebra(a) => a.to_algebra(),
        }
    }
}

pub fn parse_matrix(m: &MatrixJson, rows: usize, cols: usize) -> Result<Matrix> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!("expected a {rows}x{cols} matrix")));
    }
    let data = m
        .iter()
        .flatten()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<Rational>>>()?;
    Ok(Matrix::from_vec(rows, cols, data))
}

pub fn matrix_json(m: &Matrix) -> MatrixJson {
    m.row_vectors().iter().map(|r| format_vector(r)).collect()
}

impl TModuleJson {
    pub fn to_module(&self) -> Result<TModule> {
        let base = self.base.to_algebra()?.validated()?;
        if self.action.len() != base.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for a base of dimension {}",
                self.action.len(),
                base.dim()
            )));
        }
        let d = self.module_dim;
        let action = self
            .action
            .iter()
            .map(|m| parse_matrix(m, d, d))
            .collect::<Result<Vec<_>>>()?;
        TModule::new(base, d, action)
    }

    pub fn from_module(m: &TModule) -> Self {
        Self {
            base: BaseJson::Algebra(LieAlgebraJson::from_algebra(m.base())),
            module_dim: m.dim(),
            action: m.action().iter().map(matrix_json).collect(),
        }
    }
}

impl CouplingJson {
    pub fn to_coupling(&self) -> Result<Coupling> {
        let base = self.base.to_algebra()?;
        let fiber = self.fiber.to_algebra()?;
        if self.xi.len() != base.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} xi matrices for a base of dimension {}",
                self.xi.len(),
                base.dim()
            )));
        }
        let n = fiber.dim();
        let xi = self
            .xi
            .iter()
            .map(|m| parse_matrix(m, n, n))
            .collect::<Result<Vec<_>>>()?;
        obstruction::validate_coupling(base, fiber, xi)
    }

    pub fn from_coupling(c: &Coupling) -> Self {
        Self {
            base: BaseJson::Algebra(LieAlgebraJson::from_algebra(c.base())),
            fiber: LieAlgebraJson::from_algebra(c.fiber()),
            xi: c.xi_reps().iter().map(matrix_json).collect(),
        }
    }
}

impl CoupElementJson {
    pub fn to_element(&self) -> Result<CoupElement> {
        let coupling = self.coupling.to_coupling()?;
        let reference = self.reference.to_module()?;
        let phi = parse_matrix(&self.phi, reference.dim(), coupling.center().dim())?;
        coup::make_element(coupling, reference, phi)
    }

    pub fn from_element(e: &CoupElement) -> Self {
        Self {
            coupling: CouplingJson::from_coupling(e.coupling()),
            reference: TModuleJson::from_module(e.reference()),
            phi: matrix_json(e.phi()),
        }
    }
}

/// Parses JSON text, mapping syntax and shape errors to [`Error::Parse`].
pub fn from_str<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn cochain_json(c: &Cochain) -> Value {
    let values: Vec<Value> = c
        .tuples()
        .iter()
        .zip(c.values())
        .map(|(t, v)| json!({ "tuple": t, "v": format_vector(v) }))
        .collect();
    json!({ "degree": c.degree(), "values": values })
}

pub fn class_json(c: &CohomologyClass) -> Value {
    json!(format_vector(c.coordinates()))
}

pub fn obstruction_report(r: &ObstructionResult) -> Value {
    json!({
        "center_dim": r.zmodule.dim(),
        "betti3": r.betti3,
        "cocycle": cochain_json(&r.cocycle),
        "class": class_json(&r.class),
        "trivial": r.trivial,
    })
}

pub fn analyze_report(g: &LieAlgebra, spaces: &DerivationSpaces) -> Value {
    let center = g.center();
    json!({
        "dim": g.dim(),
        "center_dim": center.dim(),
        "center_basis": center.basis_vectors().iter().map(|v| format_vector(v)).collect::<Vec<_>>(),
        "der_dim": spaces.der().dim(),
        "inn_dim": spaces.inn().dim(),
        "out_dim": spaces.out_dim(),
        "out_algebra": LieAlgebraJson::from_algebra(spaces.out_algebra()),
    })
}

pub fn coupling_report(c: &Coupling) -> Value {
    json!({
        "valid": true,
        "base_dim": c.base().dim(),
        "fiber_dim": c.fiber().dim(),
        "center_dim": c.center().dim(),
        "out_dim": c.spaces().out_dim(),
        "outer": c.outer_values().iter().map(|v| format_vector(v)).collect::<Vec<_>>(),
        "center_action": c.center_module().action().iter().map(matrix_json).collect::<Vec<_>>(),
    })
}

pub fn extension_report(e: &ExtensionResult) -> Value {
    json!({
        "extended": true,
        "algebra": LieAlgebraJson::from_algebra(&e.total),
        "anchor": matrix_json(e.anchor.matrix()),
        "omega": cochain_json(&e.omega),
    })
}

pub fn refusal_report(class: &CohomologyClass) -> Value {
    json!({ "extended": false, "class": class_json(class) })
}

pub fn combine_report(alpha: &Rational, beta: &Rational, r: &coup::CombineResult) -> Value {
    json!({
        "alpha": format_rational(alpha),
        "beta": format_rational(beta),
        "class1": class_json(&r.audit.class1),
        "class2": class_json(&r.audit.class2),
        "class3": class_json(&r.audit.class3),
        "linearity": "pass",
    })
}

pub fn independence_report(trials: usize, seed: u64, r: &IndependenceReport) -> Value {
    json!({
        "trials": trials,
        "seed": seed,
        "default_class": class_json(&r.default_class),
        "classes": r.trial_classes.iter().map(class_json).collect::<Vec<_>>(),
        "all_equal": r.all_equal(),
    })
}

pub fn cohomology_report(degree: usize, betti: usize) -> Value {
    json!({ "degree": degree, "betti": betti })
}

/// Machine-readable description of an error.
pub fn error_report(e: &Error) -> Value {
    let mut v = json!({ "error": e.to_string() });
    let detail = match e {
        Error::InvalidAlgebra(report) => Some(json!({ "violations": report.to_string() })),
        Error::NotCouplingHomomorphism {
            i,
            j,
            defect,
            outer_defect,
        } => Some(json!({
            "i": i,
            "j": j,
            "defect": matrix_json(defect),
            "outer_defect": format_vector(outer_defect),
        })),
        Error::NotFlat { i, j, defect } => Some(json!({ "i": i, "j": j, "defect": matrix_json(defect) })),
        Error::NotIntertwining { index, defect } => Some(json!({ "index": index, "defect": matrix_json(defect) })),
        Error::LinearityViolation {
            class1,
            class2,
            class3,
            expected,
        } => Some(json!({
            "class1": format_vector(class1),
            "class2": format_vector(class2),
            "class3": format_vector(class3),
            "expected": format_vector(expected),
        })),
        Error::IndependenceViolation {
            trial,
            default_class,
            trial_class,
            ..
        } => Some(json!({
            "trial": trial,
            "default_class": format_vector(default_class),
            "trial_class": format_vector(trial_class),
        })),
        _ => None,
    };
    if let Some(d) = detail {
        v["detail"] = d;
    }
    v
}
