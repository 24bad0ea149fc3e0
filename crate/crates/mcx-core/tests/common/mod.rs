//! Shared helpers for the integration suites: an independent cofactor
//! determinant over the standard representation, seeded random data, and
//! a golden-case runner for the binary.

use num_complex::Complex64;
use rand::prelude::*;

use mcx_core::hilbert::Ket;
use mcx_core::linalg::{ComplexMatrix, McMatrix};
use mcx_core::{IdempotentRep, Level, Multicomplex};

pub fn lv(n: usize) -> Level {
    Level::new(n).unwrap()
}

/// Determinant by cofactor expansion over multicomplex entries, using
/// only the naive standard-representation product. Independent of the
/// slicewise path under test. Sizes 1 to 3.
pub fn cofactor_det(entries: &[Multicomplex], m: usize) -> Multicomplex {
    assert!((1..=3).contains(&m) && entries.len() == m * m);
    let e = |i: usize, j: usize| &entries[i * m + j];
    let mul = |a: &Multicomplex, b: &Multicomplex| a.mul_standard(b).unwrap();
    match m {
        1 => e(0, 0).clone(),
        2 => mul(e(0, 0), e(1, 1)).sub(&mul(e(0, 1), e(1, 0))).unwrap(),
        _ => {
            let minor = |r: usize, c: usize| {
                let rows: Vec<usize> = (0..3).filter(|i| *i != r).collect();
                let cols: Vec<usize> = (0..3).filter(|j| *j != c).collect();
                let a = mul(e(rows[0], cols[0]), e(rows[1], cols[1]));
                let b = mul(e(rows[0], cols[1]), e(rows[1], cols[0]));
                a.sub(&b).unwrap()
            };
            let mut acc = mul(e(0, 0), &minor(0, 0));
            acc = acc.sub(&mul(e(0, 1), &minor(0, 1))).unwrap();
            acc.add(&mul(e(0, 2), &minor(0, 2))).unwrap()
        }
    }
}

pub fn random_multicomplex(rng: &mut StdRng, level: Level) -> Multicomplex {
    let coeffs = (0..level.coeff_count())
        .map(|_| rng.random_range(-5.0..5.0))
        .collect();
    Multicomplex::from_coeffs(level, coeffs).unwrap()
}

pub fn random_rep(rng: &mut StdRng, level: Level) -> IdempotentRep {
    let comps = (0..level.component_count())
        .map(|_| Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
        .collect();
    IdempotentRep::from_components(level, comps).unwrap()
}

pub fn random_matrix(rng: &mut StdRng, level: Level, m: usize) -> McMatrix {
    let entries = (0..m * m).map(|_| random_rep(rng, level)).collect();
    McMatrix::from_entries(level, m, entries).unwrap()
}

pub fn random_nonsingular_matrix(rng: &mut StdRng, level: Level, m: usize, tol: f64) -> McMatrix {
    loop {
        let a = random_matrix(rng, level, m);
        if !a.is_singular(tol).unwrap() {
            return a;
        }
    }
}

pub fn random_self_adjoint(rng: &mut StdRng, level: Level, m: usize) -> McMatrix {
    let slices: Vec<ComplexMatrix> = (0..level.component_count())
        .map(|_| {
            let raw = ComplexMatrix::from_fn(m, |_, _| {
                Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
            });
            ComplexMatrix::from_fn(m, |i, j| 0.5 * (raw.get(i, j) + raw.get(j, i).conj()))
        })
        .collect();
    McMatrix::from_slices(level, &slices).unwrap()
}

pub fn random_ket(rng: &mut StdRng, level: Level, m: usize) -> Ket {
    Ket::from_entries(level, (0..m).map(|_| random_rep(rng, level)).collect()).unwrap()
}

/// Output of one golden-case run of the binary.
pub struct CaseRun {
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
    pub code: i32,
}

pub fn run_golden_case(dir: &std::path::Path) -> CaseRun {
    use std::io::Write;
    use std::process::{Command, Stdio};

    let args_text = std::fs::read_to_string(dir.join("args")).expect("args file");
    let args: Vec<&str> = args_text.lines().filter(|l| !l.is_empty()).collect();
    let stdin = std::fs::read(dir.join("stdin")).unwrap_or_default();

    let mut child = Command::new(env!("CARGO_BIN_EXE_mcx"))
        .args(&args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn mcx");
    child
        .stdin
        .as_mut()
        .expect("child stdin")
        .write_all(&stdin)
        .expect("write stdin");
    let out = child.wait_with_output().expect("wait for mcx");
    CaseRun {
        stdout: out.stdout,
        stderr: out.stderr,
        code: out.status.code().expect("exit code"),
    }
}
