//! Acceptance suites, runnable from the `selftest` command and the
//! acceptance test target.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use asympolar::asymlimit::{
    diag_lower_limit, geometric_schedule, growth_exponent, iterate_limit, monotone_root_property,
    nayak_projections, perturbed_limit_property, predicted_limit, predicted_limit_right, PerturbationKind, Side,
};
use asympolar::io::spec_to_json;
use asympolar::jordan::{JordanBlock, JordanSpec};
use asympolar::liebridge::{ad_consistency, cartan_polar, iwasawa, SlnElement};
use asympolar::numlin::{det, minor_det, subsets, CMatrix, PsdMatrix, C64};
use asympolar::random::{
    complex_matrix, complex_vector, nonsingular, psd_bounded, rng, sl_element, sl_separated, standard_suite,
    unitary,
};
use asympolar::{Result, Tolerances};

use crate::error::CliError;

/// Error bound at `m = 2^16` for iterates and singular-value roots.
pub const CONVERGENCE_TOL: f64 = 3e-3;
pub const FULL_MAX_M: u64 = 1 << 16;
pub const FAST_MAX_M: u64 = 1 << 10;

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub max_m: u64,
    pub seed: u64,
    pub jobs: usize,
    /// Binary used by the determinism suite.
    pub exe: Option<PathBuf>,
}

impl SelftestConfig {
    pub fn full(seed: u64) -> Self {
        SelftestConfig {
            max_m: FULL_MAX_M,
            seed,
            jobs: 1,
            exe: None,
        }
    }

    pub fn fast(seed: u64) -> Self {
        SelftestConfig {
            max_m: FAST_MAX_M,
            ..Self::full(seed)
        }
    }

    fn is_full(&self) -> bool {
        self.max_m >= FULL_MAX_M
    }

    /// `CONVERGENCE_TOL` rescaled by the `ln m / m` decay for shorter runs.
    pub fn convergence_tol(&self) -> f64 {
        if self.is_full() {
            return CONVERGENCE_TOL;
        }
        let rate = |m: f64| m.ln() / m;
        CONVERGENCE_TOL * rate(self.max_m as f64) / rate(FULL_MAX_M as f64)
    }

    /// Perturbation bound on `s_1^{1/m}`, `s_n^{1/m}`, rescaled the same way.
    pub fn perturbation_tol(&self) -> f64 {
        1e-3 * self.convergence_tol() / CONVERGENCE_TOL
    }

    fn schedule(&self) -> Vec<u64> {
        geometric_schedule(4, 4, self.max_m).expect("valid schedule")
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub suite: &'static str,
    pub criterion: u8,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

type SuiteFn = fn(&SelftestConfig) -> Result<(bool, String)>;

/// Every suite with the acceptance criterion it belongs to.
pub const SUITES: &[(&str, u8, SuiteFn)] = &[
    ("closed-form", 1, closed_form),
    ("convergence", 2, convergence),
    ("yamamoto", 3, yamamoto),
    ("b-independence", 4, b_independence),
    ("m-independence", 5, m_independence),
    ("nayak", 6, nayak),
    ("root-monotone", 7, root_monotone),
    ("cauchy-binet", 7, cauchy_binet),
    ("unitary-minor", 7, unitary_minor),
    ("diag-lower", 7, diag_lower),
    ("perturbed", 7, perturbed),
    ("lie", 8, lie_bridge),
    ("determinism", 9, determinism),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).collect()
}

pub fn run_suite(name: &str, cfg: &SelftestConfig) -> std::result::Result<SuiteOutcome, CliError> {
    let (suite, criterion, f) = SUITES
        .iter()
        .find(|s| s.0 == name)
        .copied()
        .ok_or_else(|| CliError::BadArgument {
            what: "suite",
            detail: format!("{name:?}; known suites: {}", suite_names().join(", ")),
        })?;
    let start = Instant::now();
    let (passed, detail) = match f(cfg) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Ok(SuiteOutcome {
        suite,
        criterion,
        passed,
        detail,
        elapsed: start.elapsed(),
    })
}

pub fn run_criterion(criterion: u8, cfg: &SelftestConfig) -> Vec<SuiteOutcome> {
    SUITES
        .iter()
        .filter(|s| s.1 == criterion)
        .map(|s| run_suite(s.0, cfg).expect("registered suite"))
        .collect()
}

pub fn run_all(cfg: &SelftestConfig) -> Vec<SuiteOutcome> {
    SUITES.iter().map(|s| run_suite(s.0, cfg).expect("registered suite")).collect()
}

pub fn render(outcomes: &[SuiteOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        writeln!(
            out,
            "[{}] criterion {} {:<15} {:>8.2}s  {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.criterion,
            o.suite,
            o.elapsed.as_secs_f64(),
            o.detail
        )
        .unwrap();
    }
    out
}

fn example_spec() -> JordanSpec {
    let m = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, -1.0]]);
    JordanSpec::new(m, vec![JordanBlock::real(2.0, 1), JordanBlock::real(1.0, 1)]).expect("valid spec")
}

fn closed_form(_: &SelftestConfig) -> Result<(bool, String)> {
    let spec = example_spec();
    let c = CMatrix::from_real_rows(&[&[1.0, 0.0], &[1.0, 1.0]]);
    let want_c = CMatrix::from_real_rows(&[&[1.8, 0.4], &[0.4, 1.2]]);
    let want_i = CMatrix::from_real_rows(&[&[1.5, 0.5], &[0.5, 1.5]]);
    let e1 = predicted_limit_right(&spec, &c)?.matrix().max_dist(&want_c);
    let e2 = predicted_limit_right(&spec, &CMatrix::identity(2))?.matrix().max_dist(&want_i);
    let reps = 200;
    let start = Instant::now();
    for _ in 0..reps {
        std::hint::black_box(predicted_limit_right(&spec, &c)?);
    }
    let per_call = start.elapsed() / reps;
    let passed = e1 <= 1e-12 && e2 <= 1e-12 && per_call < Duration::from_millis(1);
    Ok((passed, format!("errors {e1:.1e}, {e2:.1e}; {:.1} us per call", per_call.as_secs_f64() * 1e6)))
}

fn convergence(cfg: &SelftestConfig) -> Result<(bool, String)> {
    let tol = cfg.convergence_tol();
    let sched = cfg.schedule();
    let earlier = cfg.max_m / 16;
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for case in standard_suite(cfg.seed) {
        let r = iterate_limit(&case.spec, &case.b, &case.c, &sched, Side::Right, cfg.jobs)?;
        let last = r.final_frob_error();
        let before = r.frob_error_at(earlier).unwrap_or(f64::INFINITY);
        worst = worst.max(last);
        if !(last <= tol && (last < before || last == 0.0)) {
            failures.push(case.name.clone());
        }
    }
    let elapsed = start.elapsed();
    let slow = cfg.is_full() && elapsed > Duration::from_secs(30);
    let passed = failures.is_empty() && !slow;
    Ok((
        passed,
        format!(
            "20 cases, worst frob_error {worst:.2e} at m={} (tol {tol:.1e}){}",
            cfg.max_m,
            failure_note(&failures)
        ),
    ))
}

fn failure_note(failures: &[String]) -> String {
    if failures.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", failures.join(", "))
    }
}

fn yamamoto(cfg: &SelftestConfig) -> Result<(bool, String)> {
    let tol = cfg.convergence_tol();
    let mut worst: f64 = 0.0;
    for case in standard_suite(cfg.seed) {
        let r = iterate_limit(&case.spec, &case.b, &case.c, &[cfg.max_m], Side::Right, 1)?;
        worst = worst.max(r.final_sv_error());
    }
    Ok((worst <= tol, format!("worst singular-value root error {worst:.2e} (tol {tol:.1e})")))
}

fn b_independence(cfg: &SelftestConfig) -> Result<(bool, String)> {
    let tol = 2.0 * cfg.convergence_tol();
    let mut draws = rng(cfg.seed ^ 0xb);
    let mut worst_gap: f64 = 0.0;
    let mut worst_pred: f64 = 0.0;
    for case in standard_suite(cfg.seed) {
        let b2 = nonsingular(&mut draws, case.spec.n(), 10.0, false);
        let p1 = predicted_limit(&case.spec, &case.b, &case.c, Side::Right)?;
        let p2 = predicted_limit(&case.spec, &b2, &case.c, Side::Right)?;
        worst_pred = worst_pred.max(p1.matrix().max_dist(p2.matrix()));
        let r1 = iterate_limit(&case.spec, &case.b, &case.c, &[cfg.max_m], Side::Right, 1)?;
        let r2 = iterate_limit(&case.spec, &b2, &case.c, &[cfg.max_m], Side::Right, 1)?;
        worst_gap = worst_gap.max(r1.iterates[0].matrix().frob_dist(r2.iterates[0].matrix()));
    }
    Ok((
        worst_gap <= tol && worst_pred <= 1e-12,
        format!("iterate gap {worst_gap:.2e} (tol {tol:.1e}), predicted gap {worst_pred:.1e}"),
    ))
}

/// `M R` with `R` a random nonsingular block diagonal over the modulus groups.
fn regroup(spec: &JordanSpec, draws: &mut asympolar::random::SeededRng) -> CMatrix {
    let n = spec.n();
    let mut r = CMatrix::zeros(n, n);
    for range in spec.groups().ranges() {
        let blk = nonsingular(draws, range.len(), 10.0, false);
        for (a, i) in range.clone().enumerate() {
            for (b, j) in range.clone().enumerate() {
                r[(i, j)] = blk[(a, b)];
            }
        }
    }
    spec.m() * &r
}

fn m_independence(cfg: &SelftestConfig) -> Result<(bool, String)> {
    let mut draws = rng(cfg.seed ^ 0x3);
    let mut worst: f64 = 0.0;
    for case in standard_suite(cfg.seed) {
        let base = predicted_limit_right(&case.spec, &case.c)?;
        for _ in 0..3 {
            let moved = case.spec.with_m(regroup(&case.spec, &mut draws))?;
            let other = predicted_limit_right(&moved, &case.c)?;
            worst = worst.max(base.matrix().max_dist(other.matrix()));
        }
    }
    Ok((worst <= 1e-9, format!("largest change {worst:.2e} over 60 regroupings (tol 1e-9)")))
}

fn nayak(cfg: &SelftestConfig) -> Result<(bool, String)> {
    let mut draws = rng(cfg.seed ^ 0x6);
    let tol = Tolerances::default();
    let suite = standard_suite(cfg.seed);
    let mut recon: f64 = 0.0;
    let mut proj: f64 = 0.0;
    let mut rank_ok = true;
    let mut projections = Vec::with_capacity(suite.len());
    for case in &suite {
        let n = case.spec.n();
        let p = nayak_projections(&case.spec)?;
        let pred = predicted_limit_right(&case.spec, &CMatrix::identity(n))?;
        recon = recon.max(p.reconstruction.max_dist(pred.matrix()));
        let ranks = p.ranks();
        for j in 1..=p.len() {
            let e = p.projection(j);
            let next = p.projection(j + 1);
            proj = proj
                .max((&e * &e).max_dist(&e))
                .max(e.adjoint().max_dist(&e))
                .max((&e * &next).max_dist(&next));
            rank_ok &= (e.trace().re - ranks[j - 1] as f64).abs() <= 1e-9;
        }
        projections.push(p);
    }
    let schedule = geometric_schedule(4, 4, cfg.max_m.max(1 << 12))?;
    let mut mismatches = 0;
    let mut vectors = 0;
    'outer: loop {
        for (case, p) in suite.iter().zip(&projections) {
            for j in 1..=p.len() {
                if vectors == 100 {
                    break 'outer;
                }
                let z = complex_vector(&mut draws, case.spec.n());
                let x = p.projection(j).mul_vec(&z);
                match growth_exponent(&case.spec, &x, &schedule, &tol) {
                    Ok(g) if g.classified_j == j && g.membership_j == j => {}
                    _ => mismatches += 1,
                }
                vectors += 1;
            }
        }
    }
    let passed = recon <= 1e-10 && proj <= 1e-9 && rank_ok && mismatches == 0;
    Ok((
        passed,
        format!("reconstruction {recon:.1e}, projector defect {proj:.1e}, {mismatches} mismatches in {vectors} vectors"),
    ))
}

fn root_monotone(cfg: &SelftestConfig) -> Result<(bool, String)> {
    let mut draws = rng(cfg.seed ^ 0x7);
    let mut worst = f64::INFINITY;
    for k in 0..50 {
        let n = 1 + k % 5;
        let a = psd_bounded(&mut draws, n, 2.0);
        let gap = psd_bounded(&mut draws, n, 1.0);
        let b = (&a + &gap).hermitian_part();
        let margins = monotone_root_property(&PsdMatrix::new(&a)?, &PsdMatrix::new(&b)?, 6)?;
        worst = margins.into_iter().fold(worst, f64::min);
    }
    Ok((worst >= -1e-9, format!("50 pairs, smallest margin {worst:.2e} (floor -1e-9)")))
}

fn cauchy_binet(cfg: &SelftestConfig) -> Result<(bool, String)> {
    let mut draws = rng(cfg.seed ^ 0xcb);
    let mut worst: f64 = 0.0;
    for n in 1..=5 {
        for p in 1..=n {
            for _ in 0..4 {
                let a = complex_matrix(&mut draws, p, n);
                let b = complex_matrix(&mut draws, n, p);
                let rows: Vec<usize> = (0..p).collect();
                let lhs = det(&(&a * &b))?;
                let mut rhs = C64::new(0.0, 0.0);
                for j in subsets(n, p) {
                    rhs += minor_det(&a, &rows, &j)? * minor_det(&b, &j, &rows)?;
                }
                worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
            }
        }
    }
    Ok((worst <= 1e-9, format!("largest relative defect {worst:.1e} (tol 1e-9)")))
}

fn unitary_minor(cfg: &SelftestConfig) -> Result<(bool, String)> {
    let mut draws = rng(cfg.seed ^ 0x55);
    let mut worst: f64 = 0.0;
    for n in 1..=5 {
        for _ in 0..4 {
            let u = unitary(&mut draws, n, false);
            for p in 1..=n {
                let rows: Vec<usize> = (0..p).collect();
                let mut mass = 0.0;
                for j in subsets(n, p) {
                    mass += minor_det(&u, &rows, &j)?.norm_sqr();
                }
                worst = worst.max((mass - 1.0).abs());
            }
        }
    }
    Ok((worst <= 1e-9, format!("largest defect {worst:.1e} (tol 1e-9)")))
}

fn diag_lower(cfg: &SelftestConfig) -> Result<(bool, String)> {
    let tol = cfg.convergence_tol();
    let mut draws = rng(cfg.seed ^ 0xd1);
    let mut cases: Vec<(Vec<f64>, CMatrix)> = vec![
        (vec![2.0, 1.0], CMatrix::from_real_rows(&[&[1.0, 0.0], &[1.0, 1.0]])),
        (vec![1.0, 0.0], CMatrix::from_real_rows(&[&[1.0, 0.0], &[5.0, 1.0]])),
    ];
    for n in 3..=5 {
        let mut d: Vec<f64> = (0..n).map(|k| 3.0 * 0.7f64.powi(k as i32)).collect();
        d[n - 1] = 0.0;
        cases.push((d, asympolar::random::lower_triangular(&mut draws, n)));
    }
    let mut worst: f64 = 0.0;
    for (d, l) in &cases {
        let r = diag_lower_limit(d, l, &[cfg.max_m])?;
        worst = worst.max(r.final_frob_error());
    }
    Ok((worst <= tol, format!("{} cases, worst error {worst:.2e} (tol {tol:.1e})", cases.len())))
}

fn perturbed(cfg: &SelftestConfig) -> Result<(bool, String)> {
    let tol = cfg.perturbation_tol();
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for (k, case) in standard_suite(cfg.seed).iter().enumerate() {
        let kinds: &[PerturbationKind] = if k % 5 == 0 {
            &[PerturbationKind::EllipticUnipotent, PerturbationKind::Unitary, PerturbationKind::BoundedPolynomial]
        } else {
            &[PerturbationKind::EllipticUnipotent]
        };
        for &kind in kinds {
            let r = perturbed_limit_property(kind, &case.spec, &[cfg.max_m], cfg.seed + k as u64)?;
            worst = worst.max((r.s1_roots[0] - 1.0).abs()).max((r.sn_roots[0] - 1.0).abs());
            runs += 1;
        }
    }
    Ok((
        worst <= tol,
        format!("{runs} families, largest |s^(1/m) - 1| = {worst:.2e} (tol {tol:.1e})"),
    ))
}

fn lie_bridge(cfg: &SelftestConfig) -> Result<(bool, String)> {
    let tol = cfg.convergence_tol();
    let mut draws = rng(cfg.seed ^ 0x1e);
    let start = Instant::now();
    let (mut pred, mut iter, mut round): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in [2, 3] {
        for _ in 0..10 {
            let g = SlnElement::new(sl_separated(&mut draws, n, 1.5))?;
            let g1 = SlnElement::new(sl_element(&mut draws, n))?;
            let g2 = SlnElement::new(sl_element(&mut draws, n))?;
            let c = ad_consistency(&g, &g1, &g2, cfg.max_m)?;
            pred = pred.max(c.prediction_gap);
            iter = iter.max(c.iterate_error);
            for x in [&g, &g1, &g2] {
                let cp = cartan_polar(x)?;
                round = round.max((&cp.k * cp.p.matrix()).max_dist(x.matrix()));
                round = round.max(iwasawa(x)?.reconstruct().max_dist(x.matrix()));
            }
        }
    }
    let slow = cfg.is_full() && start.elapsed() > Duration::from_secs(60);
    let passed = pred <= 1e-7 && iter <= tol && round <= 1e-10 && !slow;
    Ok((
        passed,
        format!("20 triples: Ad gap {pred:.1e}, iterate error {iter:.2e} (tol {tol:.1e}), round trip {round:.1e}"),
    ))
}

fn determinism(cfg: &SelftestConfig) -> Result<(bool, String)> {
    let exe = match &cfg.exe {
        Some(p) => p.clone(),
        None => match std::env::current_exe() {
            Ok(p) => p,
            Err(e) => return Ok((false, format!("cannot locate the binary: {e}"))),
        },
    };
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return Ok((false, format!("cannot create a scratch directory: {e}"))),
    };
    let spec = JordanSpec::new(
        CMatrix::from_real_rows(&[&[1.0, 1.0, 0.0], &[0.0, -1.0, 2.0], &[1.0, 0.0, 1.0]]),
        vec![JordanBlock::real(2.0, 2), JordanBlock::new(C64::new(0.0, 0.5), 1)],
    )?;
    let a_path = dir.path().join("a.json");
    if let Err(e) = std::fs::write(&a_path, spec_to_json(&spec).to_string()) {
        return Ok((false, format!("cannot write input: {e}")));
    }
    let schedule = format!("4:4:{}", cfg.max_m);
    let tol = cfg.convergence_tol().to_string();
    let mut outputs = Vec::new();
    for (k, jobs) in [1, 1, 4].iter().enumerate() {
        let out = dir.path().join(format!("run{k}.csv"));
        let status = Command::new(&exe)
            .args(["iterate", "--a"])
            .arg(&a_path)
            .args(["--b", "random", "--c", "random", "--seed", "42", "--schedule", &schedule])
            .args(["--tol", &tol, "--jobs", &jobs.to_string(), "--out"])
            .arg(&out)
            .output();
        match status {
            Ok(o) if o.status.success() => {}
            Ok(o) => return Ok((false, format!("run {k} exited with {}", o.status))),
            Err(e) => return Ok((false, format!("cannot run {}: {e}", exe.display()))),
        }
        match std::fs::read(&out) {
            Ok(bytes) => outputs.push(bytes),
            Err(e) => return Ok((false, format!("cannot read output: {e}"))),
        }
    }
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    Ok((
        same && !outputs[0].is_empty(),
        format!("3 runs (jobs 1, 1, 4), {} bytes each, identical: {same}", outputs[0].len()),
    ))
}
