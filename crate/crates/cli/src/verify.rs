//! Self-check suites behind `orbitscope verify`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbitscope::inner_products::{
    all_kinds, direct_inner_product, direct_inner_product_exact, orthogonality_report,
    table_inner_product, table_inner_product_exact, Scenario,
};
use orbitscope::orbit_matrix::{analyze, min_orbit_bound, AnalysisOptions};
use orbitscope::state::sample_haar_state;
use orbitscope::z2::{
    constant_parity, find_parity_set, solve_sign_kernel, zero_rows, Z2Matrix,
    DEFAULT_ZERO_TOLERANCE,
};
use orbitscope::PureState;

use crate::report::{CaseResult, VerifyReport};
use crate::spec::StateSpec;
use crate::{CliError, Suite};

const HAAR_PER_N: u64 = 50;
const TABLE_TOL: f64 = 1e-12;
const LEMMA_INSTANCES: usize = 500;

pub fn run_suite(suite: Suite, n_max: usize) -> Result<VerifyReport, CliError> {
    let cases = match suite {
        Suite::Theorem => theorem(n_max)?,
        Suite::Table1 => table1(n_max)?,
        Suite::Triples => triples(n_max)?,
        Suite::Lemma => lemma(n_max)?,
    };
    Ok(VerifyReport {
        suite: suite.name(),
        n_max,
        passed: cases.iter().all(|c| c.pass),
        cases,
    })
}

/// The state whose orbit should have the smallest possible dimension on `n` qubits.
fn minimizer(n: usize) -> StateSpec {
    match n {
        1 => StateSpec::Basis { bits: vec![0] },
        _ if n % 2 == 0 => StateSpec::Singlets { k: n / 2 },
        _ => StateSpec::SingletsPlusZero { k: n / 2 },
    }
}

fn theorem(n_max: usize) -> Result<Vec<CaseResult>, CliError> {
    let opts = AnalysisOptions { require_exact: true, ..AnalysisOptions::default() };
    (1..=n_max)
        .map(|n| {
            let spec = minimizer(n);
            let a = analyze(&spec.build()?, opts)?;
            let bound = min_orbit_bound(n)?;
            Ok(CaseResult {
                case: spec.to_string(),
                pass: a.orbit_dimension() == bound,
                detail: format!("orbit dimension {}, bound {bound}", a.orbit_dimension()),
            })
        })
        .collect()
}

fn haar(n: usize) -> Result<Vec<PureState>, CliError> {
    (0..HAAR_PER_N)
        .map(|i| Ok(sample_haar_state(n, 7_000 + 100 * n as u64 + i)?))
        .collect()
}

fn integer_state(n: usize, rng: &mut impl Rng) -> PureState {
    loop {
        let amps: Vec<(i64, i64)> = (0..1 << n)
            .map(|_| (rng.random_range(-3..=3), rng.random_range(-3..=3)))
            .collect();
        if let Ok(s) = PureState::from_integers(n, &amps) {
            return s;
        }
    }
}

fn table1(n_max: usize) -> Result<Vec<CaseResult>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut cases = vec![];
    for n in 1..=n_max {
        let mut worst: f64 = 0.0;
        let mut failure = None;
        let mut compared = 0;
        for (i, psi) in haar(n)?.iter().enumerate() {
            let scale = psi.norm_sqr();
            for kind in all_kinds(n) {
                let (l, r) = kind.operands();
                let err = (table_inner_product(psi, &kind)? - direct_inner_product(psi, l, r)?)
                    .norm()
                    / scale;
                worst = worst.max(err);
                compared += 1;
                if err > TABLE_TOL && failure.is_none() {
                    failure = Some(format!("Haar state {i}, {kind}: relative error {err:e}"));
                }
            }
        }
        let mut exact: Vec<PureState> = vec![minimizer(n).build()?];
        exact.extend((0..5).map(|_| integer_state(n, &mut rng)));
        for (i, psi) in exact.iter().enumerate() {
            for kind in all_kinds(n) {
                let (l, r) = kind.operands();
                compared += 1;
                if table_inner_product_exact(psi, &kind)? != direct_inner_product_exact(psi, l, r)?
                    && failure.is_none()
                {
                    failure = Some(format!("exact state {i}, {kind}: values differ"));
                }
            }
        }
        cases.push(CaseResult {
            case: format!("n={n}"),
            pass: failure.is_none(),
            detail: failure.unwrap_or_else(|| {
                format!("{compared} comparisons, worst relative error {worst:.1e}")
            }),
        });
    }
    Ok(cases)
}

fn triples(n_max: usize) -> Result<Vec<CaseResult>, CliError> {
    let mut cases = vec![];
    for n in 1..=n_max {
        let mut worst: f64 = 0.0;
        let mut failure = None;
        for (i, psi) in haar(n)?.iter().enumerate() {
            for k in 0..n {
                let report = orthogonality_report(psi, &Scenario::Triple { k })?;
                for c in &report.checks {
                    worst = worst.max(c.value_re.abs());
                }
                if !report.passed() && failure.is_none() {
                    failure = Some(format!("Haar state {i}, qubit {}", k + 1));
                }
            }
        }
        cases.push(CaseResult {
            case: format!("n={n}"),
            pass: failure.is_none(),
            detail: failure.unwrap_or_else(|| {
                format!("{} states, worst real inner product {worst:.1e}", HAAR_PER_N)
            }),
        });
    }
    Ok(cases)
}

/// Integer `ξ` of length `m` with a planted sign pattern summing to zero.
fn engineered_xi(m: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let mut xi: Vec<i64> = (0..m - 1).map(|_| rng.random_range(1..=12)).collect();
        let signs: Vec<i64> = (0..m).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
        let partial: i64 = xi.iter().zip(&signs).map(|(x, s)| x * s).sum();
        if partial != 0 {
            xi.push(-partial * signs[m - 1]);
            return xi.into_iter().map(|x| x as f64).collect();
        }
    }
}

#[derive(Default)]
struct LemmaTally {
    instances: usize,
    kernel: usize,
    ones: usize,
    failure: Option<String>,
}

/// Here `n_max` bounds the length of `ξ`, clamped to at least 2.
fn lemma(n_max: usize) -> Result<Vec<CaseResult>, CliError> {
    let m_max = n_max.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut by_m: BTreeMap<usize, LemmaTally> = BTreeMap::new();
    for instance in 0..LEMMA_INSTANCES {
        let m = rng.random_range(2..=m_max);
        let xi = engineered_xi(m, &mut rng);
        let tally = by_m.entry(m).or_default();
        tally.instances += 1;
        let rows = zero_rows(&xi, DEFAULT_ZERO_TOLERANCE)?;
        let l = Z2Matrix::from_rows(rows.clone(), m)?;
        let outcome = solve_sign_kernel(&l).and_then(|w| {
            let p = find_parity_set(&xi, DEFAULT_ZERO_TOLERANCE)?;
            Ok((w, p))
        });
        let problem = match outcome {
            Err(e) => Some(e.to_string()),
            Ok((w, p)) => {
                match w.kind {
                    orbitscope::z2::WitnessKind::Kernel => tally.kernel += 1,
                    orbitscope::z2::WitnessKind::OnesPreimage => tally.ones += 1,
                }
                let even = !p.parity_set.is_empty() && p.parity_set.len() % 2 == 0;
                if !w.verifies(&l) {
                    Some("witness does not satisfy the sign matrix".to_string())
                } else if !even || constant_parity(&rows, &p.parity_set) != Some(p.parity) {
                    Some(format!("parity set {:?} is not constant", p.parity_set))
                } else {
                    None
                }
            }
        };
        if let Some(msg) = problem {
            tally.failure.get_or_insert(format!("instance {instance}, xi {xi:?}: {msg}"));
        }
    }
    Ok(by_m
        .into_iter()
        .map(|(m, t)| CaseResult {
            case: format!("m={m}"),
            pass: t.failure.is_none(),
            detail: t.failure.unwrap_or_else(|| {
                format!(
                    "{} instances, {} kernel and {} ones-preimage witnesses",
                    t.instances, t.kernel, t.ones
                )
            }),
        })
        .collect())
}
