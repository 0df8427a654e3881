//! Time evolution towards the collapse at `τ = 1`.
//!
//! In the non-Hermitian frame the state obeys `i ∂τ ψ = G ψ` with
//! `G = H − Σ` (or `G = H` when the Coriolis term is dropped); in the
//! Hermitian frame `i ∂τ φ = 𝔥 φ`. Both are integrated with classical
//! fixed-step RK4. The physical norm is `⟨ψ|Θ(τ)|ψ⟩` in the first case and
//! `‖φ‖²` in the second.

use std::fmt;
use std::str::FromStr;

use nalgebra::Complex;

use crate::dense::{self, ComplexMatrix, ComplexVector, RealMatrix};
use crate::error::{Error, Result};
use crate::maps::DysonMap;
use crate::model;

/// Largest admissible final time; the singular point itself is only probed
/// through [`horizon_approach_report`].
pub const TAU_CEILING: f64 = 0.99;
/// Relative norm drift treated as numerical blow-up.
pub const INSTABILITY_DRIFT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    /// `G = H − Σ`.
    SFull,
    /// `G = H`, Coriolis term dropped.
    SAdiabatic,
    /// `𝔥 = Ω H Ω⁻¹`.
    PFrame,
}

impl Frame {
    pub fn name(self) -> &'static str {
        match self {
            Frame::SFull => "s-full",
            Frame::SAdiabatic => "s-adiabatic",
            Frame::PFrame => "p-frame",
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Frame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s-full" => Ok(Frame::SFull),
            "s-adiabatic" => Ok(Frame::SAdiabatic),
            "p-frame" => Ok(Frame::PFrame),
            other => Err(Error::Argument(format!(
                "unknown frame '{other}' (expected s-full, s-adiabatic or p-frame)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig {
    pub n: usize,
    pub tau0: f64,
    pub tau1: f64,
    pub step: f64,
    pub frame: Frame,
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Argument("n must be ≥ 2".into()));
        }
        if self.tau1 >= 1.0 {
            return Err(Error::Domain(format!(
                "horizon excluded: tau1 = {} must stay below 1",
                self.tau1
            )));
        }
        if self.tau1 > TAU_CEILING {
            return Err(Error::Domain(format!(
                "tau1 = {} exceeds the integration ceiling {TAU_CEILING}",
                self.tau1
            )));
        }
        if !(self.tau0 >= 0.0 && self.tau0 < self.tau1) {
            return Err(Error::Domain(format!(
                "need 0 ≤ tau0 < tau1, got tau0 = {}, tau1 = {}",
                self.tau0, self.tau1
            )));
        }
        if !(self.step > 0.0) || self.step > (self.tau1 - self.tau0) / 10.0 {
            return Err(Error::Argument(format!(
                "step {} must be positive and at most (tau1 − tau0)/10",
                self.step
            )));
        }
        Ok(())
    }

    /// Number of RK4 steps; the actual step divides the interval evenly.
    pub fn steps(&self) -> usize {
        ((self.tau1 - self.tau0) / self.step - 1e-9).ceil() as usize
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionTrajectory {
    pub frame: Frame,
    pub n: usize,
    pub taus: Vec<f64>,
    pub states: Vec<ComplexVector>,
    pub phys_norm: Vec<f64>,
}

impl EvolutionTrajectory {
    /// `max |N(τ) − N(τ₀)| / N(τ₀)` over the grid.
    pub fn norm_drift(&self) -> f64 {
        let first = self.phys_norm[0];
        self.phys_norm
            .iter()
            .map(|p| (p - first).abs() / first)
            .fold(0.0, f64::max)
    }

    pub fn last_state(&self) -> &ComplexVector {
        self.states.last().expect("trajectory has at least one point")
    }
}

fn theta_norm(theta: &RealMatrix, psi: &ComplexVector) -> f64 {
    let mut acc = 0.0;
    for i in 0..psi.len() {
        for j in 0..psi.len() {
            acc += theta[(i, j)] * (psi[i].conj() * psi[j]).re;
        }
    }
    acc
}

struct Rhs<'a> {
    map: &'a DysonMap,
    frame: Frame,
}

impl Rhs<'_> {
    fn generator(&self, tau: f64) -> Result<ComplexMatrix> {
        let m = match self.frame {
            Frame::SFull => self.map.generator(tau)?.g,
            Frame::SAdiabatic => dense::to_complex(&model::build_hamiltonian(self.map.n, tau)?),
            Frame::PFrame => {
                let h = self.map.dyson_hamiltonian(tau)?;
                dense::to_complex(&((&h + h.transpose()) * 0.5))
            }
        };
        Ok(m * Complex::new(0.0, -1.0))
    }

    fn phys_norm(&self, tau: f64, psi: &ComplexVector) -> f64 {
        match self.frame {
            Frame::PFrame => psi.norm_squared(),
            _ => theta_norm(&self.map.metric(tau), psi),
        }
    }
}

/// Default initial state: the ground-state right eigenvector of `H(τ₀)`,
/// mapped by `Ω(τ₀)` when integrating in the Hermitian frame.
pub fn default_initial_state(map: &DysonMap, tau0: f64, frame: Frame) -> Result<ComplexVector> {
    let sys = model::biorthogonal_system(map.n, tau0)?;
    let right = sys.rights.column(0).into_owned();
    let v = match frame {
        Frame::PFrame => map.omega(tau0)? * right,
        _ => right,
    };
    Ok(v.map(|x| Complex::new(x, 0.0)))
}

pub fn evolve(config: &EvolutionConfig, psi0: &ComplexVector) -> Result<EvolutionTrajectory> {
    config.validate()?;
    let map = DysonMap::new(config.n)?;
    evolve_with(&map, config, psi0)
}

/// [`evolve`] reusing a precomputed factorisation.
pub fn evolve_with(
    map: &DysonMap,
    config: &EvolutionConfig,
    psi0: &ComplexVector,
) -> Result<EvolutionTrajectory> {
    config.validate()?;
    if map.n != config.n {
        return Err(Error::Contract(format!(
            "factorisation is for N = {}, configuration for N = {}",
            map.n, config.n
        )));
    }
    if psi0.len() != config.n {
        return Err(Error::Argument(format!(
            "initial state has {} components, expected {}",
            psi0.len(),
            config.n
        )));
    }
    if !(psi0.norm() > 0.0) || psi0.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Argument("initial state must be finite and nonzero".into()));
    }

    let rhs = Rhs { map, frame: config.frame };
    let steps = config.steps();
    let h = (config.tau1 - config.tau0) / steps as f64;
    let mut taus = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut norms = Vec::with_capacity(steps + 1);

    let mut psi = psi0.clone();
    let mut tau = config.tau0;
    let norm0 = rhs.phys_norm(tau, &psi);
    taus.push(tau);
    norms.push(norm0);
    states.push(psi.clone());

    let mut a = rhs.generator(tau)?;
    for i in 1..=steps {
        let next = config.tau0 + i as f64 * h;
        let mid = rhs.generator(tau + 0.5 * h)?;
        let end = rhs.generator(next)?;
        let k1 = &a * &psi;
        let k2 = &mid * (&psi + &k1 * Complex::from(0.5 * h));
        let k3 = &mid * (&psi + &k2 * Complex::from(0.5 * h));
        let k4 = &end * (&psi + &k3 * Complex::from(h));
        psi += (k1 + (k2 + k3) * Complex::from(2.0) + k4) * Complex::from(h / 6.0);
        tau = next;
        a = end;

        let norm = rhs.phys_norm(tau, &psi);
        let drift = (norm - norm0).abs() / norm0;
        let blown = !norm.is_finite() || (config.frame != Frame::SAdiabatic && drift > INSTABILITY_DRIFT);
        if blown {
            return Err(Error::Unstable { tau, drift });
        }
        taus.push(tau);
        norms.push(norm);
        states.push(psi.clone());
    }

    Ok(EvolutionTrajectory {
        frame: config.frame,
        n: config.n,
        taus,
        states,
        phys_norm: norms,
    })
}

/// Map a non-Hermitian-frame trajectory to the Hermitian frame, `φ = Ω ψ`.
pub fn frame_transport(map: &DysonMap, trajectory: &EvolutionTrajectory) -> Result<EvolutionTrajectory> {
    if trajectory.frame != Frame::SFull {
        return Err(Error::Contract(format!(
            "frame transport needs an s-full trajectory, got {}",
            trajectory.frame
        )));
    }
    let mut states = Vec::with_capacity(trajectory.states.len());
    for (&tau, psi) in trajectory.taus.iter().zip(&trajectory.states) {
        states.push(dense::to_complex(&map.omega(tau)?) * psi);
    }
    let phys_norm = states.iter().map(|s| s.norm_squared()).collect();
    Ok(EvolutionTrajectory {
        frame: Frame::PFrame,
        n: trajectory.n,
        taus: trajectory.taus.clone(),
        states,
        phys_norm,
    })
}

/// One row of [`horizon_approach_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonRow {
    pub tau: f64,
    pub anisotropy: f64,
    pub coriolis_norm: f64,
    pub defectiveness: f64,
    pub min_theta: f64,
}

/// Diagnostics on the inclusive grid `τ = 0 … tau_max` (`steps` intervals).
pub fn horizon_approach_report(n: usize, tau_max: f64, steps: usize) -> Result<Vec<HorizonRow>> {
    if !(0.0..1.0).contains(&tau_max) {
        return Err(Error::Domain(format!(
            "horizon excluded: tau_max = {tau_max} must lie in [0, 1)"
        )));
    }
    if steps == 0 {
        return Err(Error::Argument("steps must be positive".into()));
    }
    let map = DysonMap::new(n)?;
    (0..=steps)
        .map(|i| {
            let tau = tau_max * i as f64 / steps as f64;
            let theta = map.theta_values(tau);
            let lo = theta.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = theta.iter().copied().fold(0.0, f64::max);
            Ok(HorizonRow {
                tau,
                anisotropy: hi / lo,
                coriolis_norm: dense::norm_inf_complex(&map.coriolis(tau)?.sigma),
                defectiveness: model::defectiveness_gauge(n, tau)?,
                min_theta: lo,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(n: usize, tau0: f64, tau1: f64, step: f64, frame: Frame) -> EvolutionConfig {
        EvolutionConfig { n, tau0, tau1, step, frame }
    }

    fn run(n: usize, tau1: f64, step: f64, frame: Frame) -> EvolutionTrajectory {
        let map = DysonMap::new(n).unwrap();
        let psi0 = default_initial_state(&map, 0.0, frame).unwrap();
        evolve_with(&map, &config(n, 0.0, tau1, step, frame), &psi0).unwrap()
    }

    #[test]
    fn config_validation() {
        let ok = config(2, 0.0, 0.9, 1e-3, Frame::SFull);
        assert!(ok.validate().is_ok());
        assert_eq!(ok.steps(), 900);
        let err = config(2, 0.0, 1.0, 1e-3, Frame::SFull).validate().unwrap_err();
        assert!(err.to_string().contains("horizon excluded"));
        assert!(config(2, 0.0, 0.995, 1e-3, Frame::SFull).validate().is_err());
        assert!(config(2, 0.5, 0.5, 1e-3, Frame::SFull).validate().is_err());
        assert!(config(2, 0.0, 0.5, 0.1, Frame::SFull).validate().is_err());
        assert!(config(1, 0.0, 0.5, 0.01, Frame::SFull).validate().is_err());
        assert_eq!("p-frame".parse::<Frame>().unwrap(), Frame::PFrame);
        assert!("q-frame".parse::<Frame>().is_err());
    }

    #[test]
    fn full_generator_is_unitary() {
        for n in [2, 3, 4] {
            let t = run(n, 0.9, 1e-4, Frame::SFull);
            assert!(t.norm_drift() < 1e-8, "n={n} drift={:e}", t.norm_drift());
        }
    }

    #[test]
    fn hermitian_frame_is_unitary() {
        let t = run(2, 0.9, 1e-4, Frame::PFrame);
        assert!(t.norm_drift() < 1e-8);
    }

    #[test]
    fn adiabatic_run_violates_unitarity() {
        let t = run(2, 0.9, 1e-4, Frame::SAdiabatic);
        assert!(t.norm_drift() > 1e-2, "drift={:e}", t.norm_drift());
        let early = run(2, 0.3, 1e-3, Frame::SAdiabatic).norm_drift();
        assert!(early < t.norm_drift());
    }

    #[test]
    fn transport_matches_direct_hermitian_run() {
        for (n, tau1) in [(2, 0.5), (3, 0.8)] {
            let map = DysonMap::new(n).unwrap();
            let psi0 = default_initial_state(&map, 0.0, Frame::SFull).unwrap();
            let s = evolve_with(&map, &config(n, 0.0, tau1, 1e-4, Frame::SFull), &psi0).unwrap();
            let moved = frame_transport(&map, &s).unwrap();
            let phi0 = dense::to_complex(&map.omega(0.0).unwrap()) * &psi0;
            let p = evolve_with(&map, &config(n, 0.0, tau1, 1e-4, Frame::PFrame), &phi0).unwrap();
            for (a, b) in moved.states.iter().zip(&p.states) {
                assert!((a - b).norm() < 1e-6);
            }
            for (x, y) in s.phys_norm.iter().zip(&moved.phys_norm) {
                assert!((x - y).abs() < 1e-8 * x);
            }
        }
    }

    #[test]
    fn transport_rejects_other_frames() {
        let map = DysonMap::new(2).unwrap();
        let t = run(2, 0.2, 1e-3, Frame::SAdiabatic);
        assert!(frame_transport(&map, &t).is_err());
    }

    #[test]
    fn fourth_order_convergence() {
        let reference = run(2, 0.5, 1e-5, Frame::SFull);
        let coarse = run(2, 0.5, 2e-2, Frame::SFull);
        let fine = run(2, 0.5, 1e-2, Frame::SFull);
        let e1 = (coarse.last_state() - reference.last_state()).norm();
        let e2 = (fine.last_state() - reference.last_state()).norm();
        let ratio = e1 / e2;
        assert!((ratio - 16.0).abs() < 2.0, "ratio={ratio}");
    }

    #[test]
    fn bad_initial_states() {
        let c = config(2, 0.0, 0.5, 1e-2, Frame::SFull);
        assert!(evolve(&c, &ComplexVector::zeros(2)).is_err());
        assert!(evolve(&c, &ComplexVector::zeros(3)).is_err());
    }

    #[test]
    fn horizon_report_examples() {
        let r = horizon_approach_report(2, 0.9, 9).unwrap();
        assert!((r.last().unwrap().anisotropy - 19.0).abs() < 1e-8);
        assert!((r[0].anisotropy - 1.0).abs() < 1e-15);

        let r = horizon_approach_report(4, 0.5, 5).unwrap();
        assert!((r.last().unwrap().min_theta - 0.125).abs() < 1e-12);

        for n in 2..=6 {
            let r = horizon_approach_report(n, 0.95, 19).unwrap();
            for w in r.windows(2) {
                assert!(w[1].anisotropy > w[0].anisotropy);
                assert!(w[1].min_theta < w[0].min_theta);
                assert!(w[1].coriolis_norm > w[0].coriolis_norm * 0.999);
            }
            for row in &r {
                let law = ((1.0 + row.tau) / (1.0 - row.tau)).powi(n as i32 - 1);
                assert!((row.anisotropy / law - 1.0).abs() < 1e-8);
                assert!((row.min_theta / (1.0 - row.tau).powi(n as i32 - 1) - 1.0).abs() < 1e-8);
            }
        }
        assert!(horizon_approach_report(3, 1.0, 10).is_err());
    }
}
