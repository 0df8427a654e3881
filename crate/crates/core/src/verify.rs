//! One-shot invariant runner behind `ptmodel verify`.
//!
//! Every check is evaluated up to a maximum dimension and reported with its
//! worst observed deviation; a check that errors counts as failed.

use crate::dense::{self, RealMatrix};
use crate::error::Result;
use crate::evolution::{self, EvolutionConfig, Frame};
use crate::maps::{self, DysonMap};
use crate::metric::{self, CoefficientArray, CoefficientTable, MetricPolynomial};
use crate::model;

/// Outcome of one invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

/// Inputs of a verification run.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub n_max: usize,
    /// Reference coefficient arrays the solver is compared against.
    pub table: CoefficientTable,
}

impl VerifyOptions {
    pub fn new(n_max: usize) -> Self {
        Self {
            n_max,
            table: CoefficientTable::literals(),
        }
    }
}

/// A reference table with one deliberately wrong entry, for exercising the
/// failure path.
pub fn corrupted_table(n_max: usize) -> Result<CoefficientTable> {
    let n = n_max.clamp(2, 7);
    let mut array = metric::coefficient_array(n, 2.min(n))?;
    array.values[0][0] += 0.5;
    Ok(CoefficientTable::literals().with_override(array))
}

fn grid(step: f64, last: f64) -> Vec<f64> {
    let count = (last / step).round() as usize;
    (0..=count).map(|i| i as f64 * step).collect()
}

/// `(worst, limit)` → passed flag and detail line.
fn bound(worst: f64, limit: f64) -> (bool, String) {
    (worst <= limit, format!("worst {worst:.3e} (limit {limit:.0e})"))
}

struct Context {
    n_max: usize,
    polys: Vec<MetricPolynomial>,
    maps: Vec<DysonMap>,
}

impl Context {
    fn poly(&self, n: usize) -> &MetricPolynomial {
        &self.polys[n - 2]
    }

    fn map(&self, n: usize) -> &DysonMap {
        &self.maps[n - 2]
    }

    fn dims(&self, cap: usize) -> std::ops::RangeInclusive<usize> {
        2..=self.n_max.min(cap)
    }
}

type Check = fn(&Context, &VerifyOptions) -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("hamiltonian-structure", hamiltonian_structure),
    ("energies", energies),
    ("biorthogonality", biorthogonality),
    ("uniqueness", uniqueness),
    ("coefficient-arrays", coefficient_arrays),
    ("pascal-identity", pascal_identity),
    ("closed-form-spectrum", closed_form_spectrum),
    ("rank-one-collapse", rank_one_collapse),
    ("determinant-law", determinant_law),
    ("compatibility", compatibility),
    ("commuting-family", commuting_family),
    ("persymmetry", persymmetry),
    ("factorization", factorization),
    ("coriolis-consistency", coriolis_consistency),
    ("hermitization", hermitization),
    ("unitarity", unitarity),
    ("adiabatic-violation", adiabatic_violation),
    ("positivity-boundary", positivity_boundary),
];

pub fn run(options: &VerifyOptions) -> Result<VerifyReport> {
    let n_max = options.n_max.max(2);
    let mut polys = Vec::new();
    let mut maps = Vec::new();
    for n in 2..=n_max {
        polys.push(MetricPolynomial::solve(n)?);
        maps.push(DysonMap::new(n)?);
    }
    let ctx = Context { n_max, polys, maps };
    let checks = CHECKS
        .iter()
        .map(|&(name, check)| {
            let (passed, detail) = match check(&ctx, options) {
                Ok(outcome) => outcome,
                Err(e) => (false, e.to_string()),
            };
            CheckResult { name, passed, detail }
        })
        .collect();
    Ok(VerifyReport { checks })
}

fn hamiltonian_structure(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in ctx.dims(usize::MAX) {
        for tau in grid(0.1, 1.0) {
            let h = model::build_hamiltonian(n, tau)?;
            worst = worst.max(h.trace().abs());
            worst = worst.max(model::pseudo_hermiticity_residual(n, tau)?);
        }
    }
    Ok(bound(worst, 1e-12))
}

fn energies(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in ctx.dims(12) {
        for tau in grid(0.05, 0.85) {
            let numeric = dense::general_eigenvalues(&model::build_hamiltonian(n, tau)?);
            let levels = model::energies(n, tau)?.levels;
            for (z, e) in numeric.iter().zip(&levels) {
                worst = worst.max((z.re - e).abs()).max(z.im.abs());
            }
        }
    }
    Ok(bound(worst, 1e-10))
}

fn biorthogonality(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in ctx.dims(8) {
        for tau in [0.0, 0.3, 0.6, 0.9, 0.999] {
            worst = worst.max(model::biorthogonal_system(n, tau)?.biorthogonality_defect());
        }
    }
    Ok(bound(worst, 1e-9))
}

fn uniqueness(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0usize;
    for n in ctx.dims(10) {
        let (_, report) = MetricPolynomial::solve_with_report(n)?;
        worst = worst.max(report.nullspace_dim);
    }
    Ok((worst == 0, format!("largest nullspace dimension {worst}")))
}

fn coefficient_arrays(ctx: &Context, options: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut at = None;
    for (n, k) in options.table.covered(ctx.n_max) {
        let solved = CoefficientArray::from_matrix(n, k, ctx.poly(n).coefficient(k))?;
        let dev = solved.max_deviation(&options.table.lookup(n, k)?);
        if dev > worst {
            worst = dev;
            at = Some((n, k));
        }
    }
    let (passed, mut detail) = bound(worst, 1e-10);
    if let (false, Some((n, k))) = (passed, at) {
        detail.push_str(&format!(" at N = {n}, k = {k}"));
    }
    Ok((passed, detail))
}

fn pascal_identity(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in ctx.dims(12) {
        let table = metric::pascal_table(n)?;
        for tau in grid(0.1, 1.0) {
            for k in 1..=n {
                let want = metric::theta_factorized(n, k, tau);
                worst = worst.max((table.eigenvalue(k, tau) - want).abs() / want.max(1.0));
            }
        }
    }
    Ok(bound(worst, 1e-12))
}

fn closed_form_spectrum(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in ctx.dims(10) {
        for tau in grid(0.05, 0.95) {
            let sample = metric::assemble_metric(ctx.poly(n), tau)?;
            let closed = metric::metric_eigenvalues_closed(n, tau)?;
            // relative to the largest eigenvalue: the smallest ones sit below
            // the rounding floor of Θ itself near τ = 1
            let top = closed[n - 1];
            for (a, b) in sample.eigenvalues.iter().zip(&closed) {
                worst = worst.max((a - b).abs() / top);
            }
        }
    }
    Ok(bound(worst, 1e-8))
}

fn rank_one_collapse(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in ctx.dims(usize::MAX) {
        let sample = metric::assemble_metric(ctx.poly(n), 1.0)?;
        let top = 2f64.powi(n as i32 - 1);
        let (last, rest) = sample.eigenvalues.split_last().unwrap();
        worst = worst.max((last - top).abs());
        worst = rest.iter().fold(worst, |w, v| w.max(v.abs()));
    }
    Ok(bound(worst, 1e-9))
}

fn determinant_law(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in ctx.dims(8) {
        for tau in grid(0.1, 0.8) {
            let det = ctx.poly(n).evaluate(tau).determinant();
            let want = (1.0 - tau * tau).powi((n * (n - 1) / 2) as i32);
            worst = worst.max((det / want - 1.0).abs());
        }
    }
    Ok(bound(worst, 1e-8))
}

fn compatibility(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    // deterministic pseudo-random times in [0, 1)
    let taus: Vec<f64> = (0..20).map(|i| (i as f64 * 0.618_033_988_749_895).fract()).collect();
    for &tau in &taus {
        for n in ctx.dims(usize::MAX) {
            worst = worst.max(metric::compatibility_residual(&ctx.poly(n).evaluate(tau), n, tau)?);
            if tau > 0.0 && tau < 1.0 && n <= 8 {
                let kappa: Vec<f64> = (1..=n).map(|i| 0.5 + i as f64 / n as f64).collect();
                worst = worst.max(metric::spectral_metric(n, tau, &kappa)?.compatibility_residual()?);
            }
        }
        worst = worst.max(metric::metric_n2_alpha(tau, 0.7)?.compatibility_residual()?);
        worst = worst.max(metric::metric_n3_gfamily(tau, 1.2)?.compatibility_residual()?);
        if tau < 1.0 {
            let (s, _) = metric::metric_n2_hyperbolic_at(tau, 0.0)?;
            worst = worst.max(s.compatibility_residual()?);
        }
    }
    Ok(bound(worst, 1e-9))
}

fn commuting_family(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in ctx.dims(usize::MAX) {
        for (t1, t2) in [(0.1, 0.7), (0.33, 0.95), (0.5, 1.0)] {
            let a = ctx.poly(n).evaluate(t1);
            let b = ctx.poly(n).evaluate(t2);
            let c = dense::norm_inf(&(&a * &b - &b * &a)) / (dense::norm_inf(&a) * dense::norm_inf(&b));
            worst = worst.max(c);
        }
    }
    Ok(bound(worst, 1e-10))
}

fn persymmetry(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in ctx.dims(usize::MAX) {
        let j = dense::exchange(n);
        for m in &ctx.poly(n).coeffs {
            worst = worst.max(dense::max_abs(&(&j * m * &j - m)));
            worst = worst.max(dense::max_abs(&(m - m.transpose())));
        }
    }
    Ok(bound(worst, 1e-10))
}

fn factorization(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in ctx.dims(10) {
        let map = ctx.map(n);
        for tau in grid(0.05, 0.95) {
            worst = worst.max(map.factorize(tau)?.reconstruction_residual(&map.metric(tau)));
        }
    }
    Ok(bound(worst, 1e-10))
}

fn coriolis_consistency(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for tau in [0.0, 0.3, 0.7, 0.95] {
        let d = maps::coriolis_two_level(tau) - ctx.map(2).coriolis(tau)?.sigma;
        worst = worst.max(dense::norm_inf_complex(&d));
    }
    for n in ctx.dims(8) {
        let map = ctx.map(n);
        for tau in [0.05, 0.3, 0.6, 0.9] {
            let d = map.coriolis(tau)?.sigma - map.coriolis_numeric(tau, 1e-5)?.sigma;
            worst = worst.max(dense::norm_inf_complex(&d));
        }
    }
    Ok(bound(worst, 1e-6))
}

fn hermitization(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in ctx.dims(10) {
        let map = ctx.map(n);
        for tau in grid(0.1, 0.9) {
            let h = map.dyson_hamiltonian(tau)?;
            worst = worst.max(dense::norm_inf(&(&h - h.transpose())) / dense::norm_inf(&h));
            let sym: RealMatrix = (&h + h.transpose()) * 0.5;
            let eig = dense::sym_eig(&sym)?.values;
            for (a, b) in eig.iter().zip(&model::energies(n, tau)?.levels) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    Ok(bound(worst, 1e-9))
}

fn unitarity(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in ctx.dims(4) {
        let map = ctx.map(n);
        let config = EvolutionConfig { n, tau0: 0.0, tau1: 0.9, step: 1e-4, frame: Frame::SFull };
        let psi0 = evolution::default_initial_state(map, 0.0, Frame::SFull)?;
        worst = worst.max(evolution::evolve_with(map, &config, &psi0)?.norm_drift());
    }
    Ok(bound(worst, 1e-8))
}

fn adiabatic_violation(ctx: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let map = ctx.map(2);
    let config = EvolutionConfig { n: 2, tau0: 0.0, tau1: 0.9, step: 1e-3, frame: Frame::SAdiabatic };
    let psi0 = evolution::default_initial_state(map, 0.0, Frame::SAdiabatic)?;
    let drift = evolution::evolve_with(map, &config, &psi0)?.norm_drift();
    Ok((drift > 1e-2, format!("adiabatic drift {drift:.3e} (must exceed 1e-2)")))
}

fn positivity_boundary(_: &Context, _: &VerifyOptions) -> Result<(bool, String)> {
    let at_08 = metric::positivity_boundary_n3(0.8)?.unwrap_or(f64::NAN);
    let at_1 = metric::positivity_boundary_n3(1.0)?;
    let onset = metric::n3_g_eigenvalues(0.0, 1.2);
    let dev = (at_08 - 0.75f64.sqrt())
        .abs()
        .max((onset[0] - 1.0).abs())
        .max((onset[1] - 1.0).abs())
        .max((onset[2] - 1.4).abs());
    let passed = dev <= 1e-9 && at_1 == Some(1.0);
    Ok((passed, format!("worst {dev:.3e}; g = 1 boundary {at_1:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let report = run(&VerifyOptions::new(4)).unwrap();
        assert!(report.all_passed(), "{:?}", report.failed());
        assert_eq!(report.checks.len(), CHECKS.len());
    }

    #[test]
    fn corrupted_table_is_caught() {
        let options = VerifyOptions {
            n_max: 3,
            table: corrupted_table(3).unwrap(),
        };
        let report = run(&options).unwrap();
        assert_eq!(report.failed(), vec!["coefficient-arrays"]);
        let detail = &report.checks.iter().find(|c| !c.passed).unwrap().detail;
        assert!(detail.contains("N = 3, k = 2"), "{detail}");
    }
}
