//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails. Set `LIEOBS_BLESS=1` to rewrite the golden CLI outputs.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use itertools::Itertools;
use num_traits::{One, Zero};
use rand::Rng;

use lieobs_core::ce::{ce_differential, cohomology, Cochain, TModule};
use lieobs_core::coup::{
    combine, direct_sum_element, make_element, project_class, random_scalar_pairs, unit_element, uobs, CoupElement,
};
use lieobs_core::derivations::{unflatten, DerivationSpaces};
use lieobs_core::json::{self, CoupElementJson, CouplingJson};
use lieobs_core::lie::{LieAlgebra, Violation};
use lieobs_core::matrix::Matrix;
use lieobs_core::obstruction::{
    bianchi_sides, construct_extension, curvature_matrix, lift_connection, lift_connection_shifted, lift_omega,
    lift_omega_shifted, nabla_differential, obstruction_class, obstruction_cocycle, random_shift, small_rational,
    trial_rng, validate_coupling, verify_independence, Coupling,
};
use lieobs_core::rational::{int, unit, Rational, Vector};
use lieobs_core::Error;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn fixture_files(dir: &str) -> Vec<(String, PathBuf)> {
    let mut files: Vec<_> = fs::read_dir(fixtures().join(dir))
        .expect("fixture directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), p))
        .collect();
    files.sort();
    files
}

fn corpus() -> Vec<(String, Coupling)> {
    fixture_files("corpus")
        .into_iter()
        .map(|(name, p)| {
            let j: CouplingJson = json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
            (name, j.to_coupling().unwrap())
        })
        .collect()
}

fn elements() -> Vec<(String, CoupElement)> {
    fixture_files("elements")
        .into_iter()
        .map(|(name, p)| {
            let j: CoupElementJson = json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
            (name, j.to_element().unwrap())
        })
        .collect()
}

fn l5() -> LieAlgebra {
    LieAlgebra::with_dim(5, vec![(0, 1, unit(5, 3)), (0, 2, unit(5, 4))]).unwrap()
}

// Criterion 1 ---------------------------------------------------------------

/// `sum_b v_b t[b][k]`, the raw left bracket `[v, e_k]`.
fn left(t: &[Vec<Vector>], v: &[Rational], k: usize) -> Vector {
    let n = t.len();
    let mut out = vec![Rational::zero(); n];
    for (b, x) in v.iter().enumerate() {
        for l in 0..n {
            out[l] += x * &t[b][k][l];
        }
    }
    out
}

type Witnesses = (Vec<(usize, usize, Vector)>, Vec<(usize, usize, usize, Vector)>);

/// Every failing pair and triple of a raw table, by direct expansion.
fn brute_force_witnesses(t: &[Vec<Vector>]) -> Witnesses {
    let n = t.len();
    let mut anti = Vec::new();
    for (i, j) in (0..n).flat_map(|i| (i..n).map(move |j| (i, j))) {
        let r: Vector = (0..n).map(|l| &t[i][j][l] + &t[j][i][l]).collect();
        if r.iter().any(|x| !x.is_zero()) {
            anti.push((i, j, r));
        }
    }
    let mut jac = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (left(t, &t[i][j], k), left(t, &t[j][k], i), left(t, &t[k][i], j));
                let r: Vector = (0..n).map(|l| &a[l] + &b[l] + &c[l]).collect();
                if r.iter().any(|x| !x.is_zero()) {
                    jac.push((i, j, k, r));
                }
            }
        }
    }
    (anti, jac)
}

fn reported(g: &LieAlgebra, t: &[Vec<Vector>]) -> Witnesses {
    match LieAlgebra::from_tensor(g.names().to_vec(), t) {
        Ok(_) => (vec![], vec![]),
        Err(Error::InvalidAlgebra(r)) => {
            let mut out: Witnesses = (vec![], vec![]);
            for v in r.violations {
                match v {
                    Violation::Antisymmetry { i, j, residual } => out.0.push((i, j, residual)),
                    Violation::Jacobi { i, j, k, residual } => out.1.push((i, j, k, residual)),
                }
            }
            out
        }
        Err(e) => panic!("unexpected error {e}"),
    }
}

fn structure_validation() -> Check {
    let algebras = [
        LieAlgebra::heisenberg(),
        LieAlgebra::sl2(),
        LieAlgebra::so3(),
        LieAlgebra::abelian(3),
        l5(),
    ];
    for g in &algebras {
        ensure!(g.validate().is_valid(), "{:?} rejected", g.names());
    }
    let (mut mutants, mut rejected) = (0, 0);
    for g in &algebras[..4] {
        let n = g.dim();
        let base = g.tensor();
        let mut variants = Vec::new();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let mut t = base.clone();
                    t[i][j][k] += Rational::one();
                    variants.push(t.clone());
                    if i < j {
                        t[j][i][k] -= Rational::one();
                        variants.push(t);
                    }
                }
            }
        }
        for t in variants {
            let expected = brute_force_witnesses(&t);
            if expected.0.is_empty() && expected.1.is_empty() {
                continue;
            }
            mutants += 1;
            let found = reported(g, &t);
            ensure!(
                found == expected,
                "{:?}: witnesses {:?} vs oracle {:?}",
                g.names(),
                found,
                expected
            );
            rejected += 1;
        }
    }
    Ok(format!(
        "5 algebras valid, {rejected}/{mutants} broken variants rejected with oracle witnesses"
    ))
}

// Criterion 2 ---------------------------------------------------------------

fn gauss_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// (center, der, inn, out) from the derivation equations and the rank of `ad`.
fn dims_oracle(g: &LieAlgebra) -> (usize, usize, usize, usize) {
    let n = g.dim();
    let c = g.tensor();
    let mut eqs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = vec![Rational::zero(); n * n];
                for l in 0..n {
                    row[k * n + l] += &c[i][j][l];
                    row[l * n + i] -= &c[l][j][k];
                    row[l * n + j] -= &c[i][l][k];
                }
                eqs.push(row);
            }
        }
    }
    let der = n * n - gauss_rank(eqs);
    let ads = (0..n)
        .map(|i| {
            (0..n)
                .flat_map(|r| (0..n).map(move |s| (r, s)))
                .map(|(r, s)| c[i][s][r].clone())
                .collect()
        })
        .collect();
    let inn = gauss_rank(ads);
    (n - inn, der, inn, der - inn)
}

fn derivation_dimensions() -> Check {
    ensure!(dims_oracle(&LieAlgebra::heisenberg()) == (1, 6, 2, 4), "h3 oracle");
    ensure!(dims_oracle(&LieAlgebra::sl2()) == (0, 3, 3, 0), "sl2 oracle");
    let mut checked = 0;
    for g in [
        LieAlgebra::heisenberg(),
        LieAlgebra::sl2(),
        LieAlgebra::so3(),
        LieAlgebra::abelian(3),
        l5(),
    ] {
        let s = DerivationSpaces::new(&g).map_err(|e| e.to_string())?;
        let lib = (g.center().dim(), s.der().dim(), s.inn().dim(), s.out_dim());
        let oracle = dims_oracle(&g);
        ensure!(lib == oracle, "{:?}: {lib:?} vs oracle {oracle:?}", g.names());
        checked += 1;
    }
    Ok(format!(
        "h3 (1, 6, 2, 4), sl2 (0, 3, 3, 0); {checked} algebras match the oracle"
    ))
}

// Criterion 3 ---------------------------------------------------------------

fn random_matrix(rng: &mut impl Rng, n: usize) -> Matrix {
    Matrix::from_vec(n, n, (0..n * n).map(|_| small_rational(rng)).collect())
}

fn random_invertible(rng: &mut impl Rng, n: usize) -> (Matrix, Matrix) {
    loop {
        let p = random_matrix(rng, n);
        if let Some(q) = p.inverse() {
            return (p, q);
        }
    }
}

/// Abelian bases with commuting polynomial actions, and conjugated adjoint
/// actions of h3 and sl2.
fn seeded_module(i: u64) -> TModule {
    let mut rng = trial_rng(2024, i);
    match i % 3 {
        0 => {
            let m = 2 + (i as usize / 3) % 3;
            let d = 1 + (i as usize) % 3;
            let a = random_matrix(&mut rng, d);
            let a2 = a.mul(&a);
            let action = (0..m)
                .map(|_| {
                    let (x, y, z) = (
                        small_rational(&mut rng),
                        small_rational(&mut rng),
                        small_rational(&mut rng),
                    );
                    Matrix::scalar(d, &x).add(&a.scale(&y)).add(&a2.scale(&z))
                })
                .collect();
            TModule::new(LieAlgebra::abelian(m), d, action).unwrap()
        }
        k => {
            let g = if k == 1 {
                LieAlgebra::heisenberg()
            } else {
                LieAlgebra::sl2()
            };
            let (p, q) = random_invertible(&mut rng, 3);
            let action = (0..3).map(|b| p.mul(&g.ad_basis(b)).mul(&q)).collect();
            TModule::new(g, 3, action).unwrap()
        }
    }
}

fn binomial_oracle(m: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (m - i) / (i + 1))
}

fn ce_complex() -> Check {
    let mut cochains = 0;
    for i in 0..10u64 {
        let module = seeded_module(i);
        let m = module.base().dim();
        let d = module.dim();
        let mut rng = trial_rng(4048, i);
        for j in 0..20 {
            let k = j % (m - 1);
            let c = Cochain::from_fn(m, k, d, |_| (0..d).map(|_| small_rational(&mut rng)).collect());
            let dc = ce_differential(&module, &c).map_err(|e| e.to_string())?;
            let ddc = ce_differential(&module, &dc).map_err(|e| e.to_string())?;
            ensure!(ddc.is_zero(), "d(d c) != 0 on module {i}, degree {k}");
            cochains += 1;
        }
    }
    for m in 1..=4 {
        let module = TModule::trivial(LieAlgebra::abelian(m), 1);
        for k in 0..=m {
            let b = cohomology(&module, k).map_err(|e| e.to_string())?.betti();
            ensure!(b == binomial_oracle(m, k), "H^{k}(Q^{m}) = {b}");
        }
    }
    Ok(format!(
        "d(d c) = 0 on {cochains} cochains over 10 modules; abelian Betti numbers binomial for m <= 4"
    ))
}

// Criterion 4 ---------------------------------------------------------------

fn pipeline_on(c: &Coupling, nabla_shift: Option<&[Vector]>, omega_shift: Option<&Cochain>) -> Result<(), String> {
    let e = |e: Error| e.to_string();
    let l = match nabla_shift {
        Some(us) => {
            let ads: Vec<Matrix> = us.iter().map(|u| c.fiber().ad_matrix(u)).collect();
            lift_connection_shifted(c, &ads).map_err(e)?
        }
        None => lift_connection(c),
    };
    let o = match omega_shift {
        Some(s) => lift_omega_shifted(c, &l, s).map_err(e)?,
        None => lift_omega(c, &l).map_err(e)?,
    };
    let m = c.base().dim();
    for (i, j) in (0..m).tuple_combinations() {
        let r = curvature_matrix(c, &l, i, j);
        let out = c.spaces().outer_class(&r).ok_or("curvature is not a derivation")?;
        ensure!(out.iter().all(Zero::is_zero), "outer part of R({i},{j}) nonzero");
        ensure!(
            c.fiber().ad_matrix(o.omega.value(&[i, j])) == r,
            "ad Ω({i},{j}) != R({i},{j})"
        );
    }
    let d_omega = nabla_differential(c, &o).map_err(e)?;
    ensure!(
        d_omega.values().iter().all(|v| c.fiber().is_central(v)),
        "d Ω not central"
    );
    let u = obstruction_cocycle(c, &o).map_err(e)?.cocycle;
    if u.degree() <= m {
        ensure!(ce_differential(c.center_module(), &u).map_err(e)?.is_zero(), "d U != 0");
    } else {
        ensure!(u.is_zero(), "U nonzero above the base dimension");
    }
    let (lhs, rhs) = bianchi_sides(c, &o).map_err(e)?;
    ensure!(lhs == rhs, "Bianchi sides differ");
    Ok(())
}

fn pipeline_identities() -> Check {
    let corpus = corpus();
    ensure!(corpus.len() >= 10, "corpus has {} couplings", corpus.len());
    let base_dims: BTreeSet<usize> = corpus.iter().map(|(_, c)| c.base().dim()).collect();
    ensure!((1..=4).all(|d| base_dims.contains(&d)), "base dimensions {base_dims:?}");
    ensure!(corpus.iter().any(|(_, c)| c.fiber().is_abelian()), "no abelian fiber");
    ensure!(corpus.iter().any(|(_, c)| c.center().dim() == 0), "no centerless fiber");
    ensure!(
        corpus.iter().any(|(_, c)| *c.fiber() == LieAlgebra::heisenberg()),
        "no h3 fiber"
    );
    let mut runs = 0;
    for (name, c) in &corpus {
        pipeline_on(c, None, None).map_err(|e| format!("{name}: {e}"))?;
        for t in 0..3 {
            let s = random_shift(c, 99, t);
            pipeline_on(c, Some(&s.nabla_shift), Some(&s.omega_shift)).map_err(|e| format!("{name} shift {t}: {e}"))?;
        }
        runs += 4;
    }
    Ok(format!(
        "{} couplings, {runs} lifts: all five identities hold",
        corpus.len()
    ))
}

// Criterion 5 ---------------------------------------------------------------

fn independence() -> Check {
    let corpus = corpus();
    let mut trials = 0;
    for (name, c) in &corpus {
        let default = obstruction_class(c).map_err(|e| e.to_string())?.class;
        let r = verify_independence(c, 25, 7).map_err(|e| format!("{name}: {e}"))?;
        ensure!(r.default_class == default, "{name}: default class differs");
        ensure!(r.trial_classes.len() == 25, "{name}: {} trials", r.trial_classes.len());
        let failures = r.trial_classes.iter().filter(|k| **k != default).count();
        ensure!(failures == 0, "{name}: {failures} trials disagree");
        trials += r.trial_classes.len();
    }
    Ok(format!(
        "{trials} re-choices over {} couplings, 0 failures",
        corpus.len()
    ))
}

// Criterion 6 ---------------------------------------------------------------

/// Single random derivations over a line.
fn line_couplings() -> Vec<(String, Coupling)> {
    let mut out = Vec::new();
    for (label, g) in [
        ("h3", LieAlgebra::heisenberg()),
        ("l5", l5()),
        ("sl2", LieAlgebra::sl2()),
    ] {
        let s = DerivationSpaces::new(&g).unwrap();
        for t in 0..4 {
            let mut rng = trial_rng(606, t);
            let coords: Vector = (0..s.der().dim()).map(|_| small_rational(&mut rng)).collect();
            let d = unflatten(g.dim(), &s.der().combination(&coords));
            let c = validate_coupling(LieAlgebra::abelian(1), g.clone(), vec![d]).unwrap();
            out.push((format!("{label}_line_{t}"), c));
        }
    }
    out
}

fn triviality() -> Check {
    let (mut forced, mut built, mut refused) = (0, 0, 0);
    for (name, c) in corpus().into_iter().chain(line_couplings()) {
        let r = obstruction_class(&c).map_err(|e| format!("{name}: {e}"))?;
        if c.base().dim() <= 2 || c.center().dim() == 0 {
            ensure!(r.trivial, "{name}: nontrivial class under a triviality hypothesis");
            forced += 1;
        }
        match construct_extension(&c).map_err(|e| format!("{name}: {e}"))? {
            Some(e) => {
                ensure!(r.trivial, "{name}: extension built for a nontrivial class");
                ensure!(e.total.validate().is_valid(), "{name}: extension fails validation");
                ensure!(
                    e.total.dim() == c.base().dim() + c.fiber().dim(),
                    "{name}: wrong dimension"
                );
                ensure!(
                    e.anchor.kernel() == e.kernel_inclusion.image(),
                    "{name}: kernel != fiber"
                );
                ensure!(e.kernel_inclusion.kernel().dim() == 0, "{name}: fiber not embedded");
                ensure!(e.anchor.image().dim() == c.base().dim(), "{name}: anchor not onto");
                built += 1;
            }
            None => {
                ensure!(!r.trivial, "{name}: no extension for a trivial class");
                refused += 1;
            }
        }
    }
    Ok(format!(
        "{forced} hypothesis cases trivial; {built} exact extensions, {refused} nontrivial refusals"
    ))
}

// Criterion 7 ---------------------------------------------------------------

fn same_reference(a: &CoupElement, b: &CoupElement) -> bool {
    a.coupling().base() == b.coupling().base() && a.reference() == b.reference()
}

fn linearity() -> Check {
    let elements = elements();
    let e = |e: Error| e.to_string();
    let (mut pairs, mut samples) = (0, 0);
    for (idx, ((n1, a), (n2, b))) in elements.iter().cartesian_product(&elements).enumerate() {
        if !same_reference(a, b) {
            continue;
        }
        let (ua, ub) = (uobs(a).map_err(e)?, uobs(b).map_err(e)?);
        for (alpha, beta) in random_scalar_pairs(idx as u64, 10) {
            let expected: Vector = ua
                .coordinates()
                .iter()
                .zip(ub.coordinates())
                .map(|(x, y)| &alpha * x + &beta * y)
                .collect();
            let r = combine(a, b, &alpha, &beta).map_err(|err| format!("{n1}, {n2}: {err}"))?;
            let got = uobs(&r.element).map_err(e)?;
            ensure!(got.coordinates() == &expected, "{n1}, {n2} at ({alpha}, {beta})");
            samples += 1;
        }
        pairs += 1;
    }
    for (name, a) in &elements {
        let ua = uobs(a).map_err(e)?;
        let unit = unit_element(a.reference()).map_err(e)?;
        let r = combine(a, &unit, &int(1), &int(0)).map_err(|err| format!("{name} (1, 0): {err}"))?;
        ensure!(uobs(&r.element).map_err(e)? == ua, "{name}: (1, 0) changed the class");
        let r = combine(a, a, &int(1), &int(-1)).map_err(|err| format!("{name} (1, -1): {err}"))?;
        ensure!(uobs(&r.element).map_err(e)?.is_zero(), "{name}: (1, -1) not zero");
    }
    Ok(format!(
        "{pairs} pairs x 10 scalars = {samples} exact matches; (1, 0) and (1, -1) on {} elements",
        elements.len()
    ))
}

// Criterion 8 ---------------------------------------------------------------

fn direct_sums() -> Check {
    let e = |e: Error| e.to_string();
    let mut all = elements();
    for (name, c) in corpus() {
        let z = c.center_module().clone();
        let n = z.dim();
        all.push((
            format!("{name}_self"),
            make_element(c, z, Matrix::identity(n)).map_err(e)?,
        ));
    }
    let (mut pairs, mut zero_sums) = (0, 0);
    for ((n1, a), (n2, b)) in all.iter().tuple_combinations().chain(all.iter().map(|x| (x, x))) {
        if a.coupling().base() != b.coupling().base() {
            continue;
        }
        let (ua, ub) = (uobs(a).map_err(e)?, uobs(b).map_err(e)?);
        let s = direct_sum_element(a, b).map_err(|err| format!("{n1} + {n2}: {err}"))?;
        let us = uobs(&s).map_err(e)?;
        ensure!(
            project_class(&us, 0, a.reference()).map_err(e)? == ua,
            "{n1} + {n2}: first block"
        );
        ensure!(
            project_class(&us, 1, b.reference()).map_err(e)? == ub,
            "{n1} + {n2}: second block"
        );
        if ua.is_zero() && ub.is_zero() {
            ensure!(us.is_zero(), "{n1} + {n2}: sum of trivial classes is nontrivial");
            zero_sums += 1;
        }
        pairs += 1;
    }
    Ok(format!(
        "{pairs} sums split into their summands; {zero_sums} trivial sums stay trivial"
    ))
}

// Criterion 9 ---------------------------------------------------------------

fn lieobs(args: &[String]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_lieobs"))
        .args(args)
        .output()
        .expect("spawn lieobs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn fx(rel: &str) -> String {
    fixtures().join(rel).to_string_lossy().into_owned()
}

fn golden_cases() -> Vec<(String, Vec<String>)> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut cases = vec![
        ("analyze_h3".into(), s(&["analyze", &fx("algebras/h3.json")])),
        ("analyze_sl2".into(), s(&["analyze", &fx("algebras/sl2.json")])),
        ("analyze_l5".into(), s(&["analyze", &fx("algebras/l5.json")])),
        (
            "coupling_check_h3_q3".into(),
            s(&["coupling-check", &fx("corpus/h3_q3.json")]),
        ),
        ("extend_l5_q3".into(), s(&["extend", &fx("corpus/l5_q3.json")])),
        (
            "extend_abelian_q1".into(),
            s(&["extend", &fx("corpus/abelian_q1.json")]),
        ),
        ("extend_sl2_q3".into(), s(&["extend", &fx("corpus/sl2_q3.json")])),
        ("extend_h3_q4".into(), s(&["extend", &fx("corpus/h3_q4.json")])),
        (
            "combine_l5_two_thirds".into(),
            s(&[
                "combine",
                &fx("elements/l5_first.json"),
                &fx("elements/l5_second.json"),
                "--alpha",
                "2/3",
                "--beta",
                "-1",
            ]),
        ),
        (
            "combine_l5_twisted".into(),
            s(&[
                "combine",
                &fx("elements/l5_first_twisted.json"),
                &fx("elements/l5_second.json"),
                "--alpha",
                "-5/2",
                "--beta",
                "3",
            ]),
        ),
        (
            "combine_h3".into(),
            s(&[
                "combine",
                &fx("elements/h3_first.json"),
                &fx("elements/h3_scaled.json"),
                "--alpha",
                "1",
                "--beta",
                "1",
            ]),
        ),
        (
            "combine_l5_unit_one_zero".into(),
            s(&[
                "combine",
                &fx("elements/l5_first.json"),
                &fx("elements/abelian_q2_unit.json"),
                "--alpha",
                "1",
                "--beta",
                "0",
            ]),
        ),
        (
            "combine_l5_self_cancel".into(),
            s(&[
                "combine",
                &fx("elements/l5_second.json"),
                &fx("elements/l5_second.json"),
                "--alpha",
                "1",
                "--beta",
                "-1",
            ]),
        ),
        (
            "cohomology_q3_degree5".into(),
            s(&["cohomology", &fx("modules/q3_trivial.json"), "--degree", "5"]),
        ),
        (
            "independence_sl2_q3_no_trials".into(),
            s(&["independence", &fx("corpus/sl2_q3.json"), "--trials", "0"]),
        ),
        (
            "cohomology_q3_degree3".into(),
            s(&["cohomology", &fx("modules/q3_trivial.json"), "--degree", "3"]),
        ),
        (
            "cohomology_sl2_adjoint_degree1".into(),
            s(&["cohomology", &fx("modules/sl2_adjoint.json"), "--degree", "1"]),
        ),
        (
            "independence_l5_q3".into(),
            s(&[
                "independence",
                &fx("corpus/l5_q3.json"),
                "--trials",
                "25",
                "--seed",
                "7",
            ]),
        ),
    ];
    for (name, p) in fixture_files("corpus") {
        cases.push((
            format!("obstruction_{name}"),
            vec!["obstruction".into(), p.to_string_lossy().into_owned()],
        ));
    }
    cases
}

fn exit_cases() -> Vec<(i32, Vec<String>)> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        (0, s(&["analyze", &fx("algebras/so3.json")])),
        (0, s(&["cohomology", &fx("modules/zero_dim.json"), "--degree", "0"])),
        (1, s(&["coupling-check", &fx("invalid/not_homomorphism.json")])),
        (1, s(&["coupling-check", &fx("invalid/not_derivation.json")])),
        (1, s(&["analyze", &fx("invalid/reversed_bracket.json")])),
        (1, s(&["analyze", &fx("invalid/jacobi_broken.json")])),
        (1, s(&["cohomology", &fx("modules/nonflat.json"), "--degree", "1"])),
        (
            1,
            s(&[
                "combine",
                &fx("elements/l5_first.json"),
                &fx("elements/l5_first.json"),
                "--alpha",
                "1",
                "--beta",
                "0",
            ]),
        ),
        (
            1,
            s(&[
                "combine",
                &fx("elements/l5_first.json"),
                &fx("elements/h3_first.json"),
                "--alpha",
                "1",
                "--beta",
                "1",
            ]),
        ),
        (1, s(&["frobnicate"])),
        (2, s(&["obstruction", "--perturb-omega", &fx("corpus/h3_q3.json")])),
        (3, s(&["analyze", &fx("invalid/malformed.json")])),
        (3, s(&["analyze", &fx("invalid/bad_rational.json")])),
        (3, s(&["analyze", &fx("algebras/missing.json")])),
    ]
}

fn cli_contract() -> Check {
    let bless = std::env::var_os("LIEOBS_BLESS").is_some();
    let golden = fixtures().join("golden");
    if bless {
        fs::create_dir_all(&golden).map_err(|e| e.to_string())?;
    }
    let cases = golden_cases();
    for (name, args) in &cases {
        let (code1, first) = lieobs(args);
        let (code2, second) = lieobs(args);
        ensure!(code1 == 0 && code2 == 0, "{name}: exit {code1}/{code2}");
        ensure!(first == second, "{name}: output differs between runs");
        let path = golden.join(format!("{name}.json"));
        if bless {
            fs::write(&path, &first).map_err(|e| e.to_string())?;
        }
        let stored = fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure!(stored == first, "{name}: differs from golden file");
    }
    let mut seen = BTreeSet::new();
    let exits = exit_cases();
    for (want, args) in &exits {
        let (code, _) = lieobs(args);
        ensure!(code == *want, "{args:?}: exit {code}, expected {want}");
        seen.insert(code);
    }
    ensure!(seen == BTreeSet::from([0, 1, 2, 3]), "exit codes covered: {seen:?}");
    Ok(format!(
        "{} golden outputs byte-stable; {} exit-code fixtures cover 0/1/2/3",
        cases.len(),
        exits.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("structure validation", structure_validation),
        ("derivation dimensions", derivation_dimensions),
        ("CE complex", ce_complex),
        ("pipeline identities", pipeline_identities),
        ("independence of choices", independence),
        ("triviality and extensions", triviality),
        ("linearity of combine", linearity),
        ("direct-sum splitting", direct_sums),
        ("CLI contract", cli_contract),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, (label, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {label}: {detail} ({secs:.1}s)", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {label}: {detail} ({secs:.1}s)", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
