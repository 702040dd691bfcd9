use crate::diffpoly::DiffPoly;

use super::eval::functional_eval;
use super::integrator::{Scheme, Stepper};
use super::{FlowSpec, SpectralError, SpectralField};

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub n: usize,
    pub dt: f64,
    pub t_final: f64,
    /// Retained fraction of the band after each nonlinear evaluation.
    pub dealias: f64,
    /// 2 or 4.
    pub order: u32,
    /// Record diagnostics every this many steps (and at the final time).
    pub diag_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { n: 256, dt: 1e-3, t_final: 1.0, dealias: 2.0 / 3.0, order: 4, diag_every: 10 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SpectralError> {
        let bad = |m: &str| Err(SpectralError::InvalidConfig(m.to_string()));
        if !(self.dt > 0.0) {
            return bad("dt must be positive");
        }
        if self.n < 16 || !self.n.is_power_of_two() {
            return bad("N must be a power of two ≥ 16");
        }
        if !(self.dealias > 0.0 && self.dealias <= 1.0) {
            return bad("dealias must lie in (0, 1]");
        }
        if !(self.t_final >= 0.0) {
            return bad("T must be nonnegative");
        }
        if self.diag_every == 0 {
            return bad("diagnostics cadence must be ≥ 1");
        }
        Scheme::from_order(self.order)?;
        Ok(())
    }

    /// Number of steps, `T/dt` rounded to the nearest integer.
    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }
}

/// Quantities recorded along a run.
pub struct Diagnostics<'a> {
    pub s: f64,
    pub hamiltonians: Vec<DiffPoly>,
    pub energy: Option<&'a (dyn Fn(&SpectralField) -> f64 + Sync)>,
}

impl Diagnostics<'_> {
    pub fn norms_only(s: f64) -> Self {
        Diagnostics { s, hamiltonians: Vec::new(), energy: None }
    }

    pub fn row(&self, t: f64, u: &SpectralField) -> DiagRow {
        DiagRow {
            t,
            l2: u.l2_norm(),
            hs: u.sobolev_norm(self.s),
            h: self.hamiltonians.iter().map(|h| functional_eval(h, u)).collect(),
            es: self.energy.map(|e| e(u)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagRow {
    pub t: f64,
    pub l2: f64,
    pub hs: f64,
    pub h: Vec<f64>,
    pub es: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub rows: Vec<DiagRow>,
    pub final_state: SpectralField,
}

/// Integrates `flow` from `u0`, calling `observe(t, u)` at `t = 0`, every
/// `diag_every` steps and at the final time.
pub fn solve_with(
    u0: &SpectralField,
    flow: &FlowSpec,
    cfg: &SolverConfig,
    mut observe: impl FnMut(f64, &SpectralField),
) -> Result<SpectralField, SpectralError> {
    cfg.validate()?;
    let u0 = if u0.n() == cfg.n { u0.clone() } else { u0.resample(cfg.n) };
    let stepper = Stepper::new(flow, cfg.n, cfg.dt, cfg.dealias, Scheme::from_order(cfg.order)?);
    let mut u = stepper.filter(&u0);
    observe(0.0, &u);
    let steps = cfg.steps();
    for i in 1..=steps {
        let t = i as f64 * cfg.dt;
        u = stepper.step(&u).map_err(|_| SpectralError::BlowUp { t })?;
        if i % cfg.diag_every == 0 || i == steps {
            observe(t, &u);
        }
    }
    Ok(u)
}

pub fn solve(
    u0: &SpectralField,
    flow: &FlowSpec,
    cfg: &SolverConfig,
    diag: &Diagnostics,
) -> Result<Solution, SpectralError> {
    let mut rows = Vec::new();
    let final_state = solve_with(u0, flow, cfg, |t, u| rows.push(diag.row(t, u)))?;
    Ok(Solution { rows, final_state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::generate;

    #[test]
    fn zero_stays_zero() {
        let cfg = SolverConfig { n: 32, t_final: 0.1, ..Default::default() };
        let sol = solve(&SpectralField::zeros(32), &FlowSpec::model(2), &cfg, &Diagnostics::norms_only(4.0))
            .unwrap();
        assert_eq!(sol.final_state.max_abs(), 0.0);
        assert_eq!(sol.rows.len(), 11);
    }

    #[test]
    fn kdv_conserves_invariants() {
        let cfg = SolverConfig { n: 64, dt: 1e-2, t_final: 1.0, ..Default::default() };
        let diag = Diagnostics {
            s: 1.0,
            hamiltonians: (0..3).map(|m| generate(m).h.canonical).collect(),
            energy: None,
        };
        let u0 = SpectralField::from_fn(64, |x| 0.1 * x.cos());
        let sol = solve(&u0, &FlowSpec::hierarchy(1), &cfg, &diag).unwrap();
        let (first, last) = (&sol.rows[0], sol.rows.last().unwrap());
        for m in 0..3 {
            let rel = (last.h[m] - first.h[m]).abs() / first.h[m].abs();
            assert!(rel < 1e-8, "H_{m} drift {rel}");
        }
    }

    #[test]
    fn dissipation_without_nonlinearity() {
        let cfg = SolverConfig { n: 32, dt: 1e-2, t_final: 0.5, diag_every: 1, ..Default::default() };
        let u0 = SpectralField::from_fn(32, |x| x.sin() + 0.5 * (4.0 * x).cos());
        let sol = solve(&u0, &FlowSpec::regularized(2, 1e-3).linear_only(), &cfg, &Diagnostics::norms_only(0.0))
            .unwrap();
        for w in sol.rows.windows(2) {
            assert!(w[1].l2 <= w[0].l2 + 1e-15);
        }
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = SolverConfig { dt: 0.0, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = SolverConfig { order: 3, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
