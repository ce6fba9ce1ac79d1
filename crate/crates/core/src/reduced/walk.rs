//! Measured walk: evolve, check the target, continue on "not found".

use num_complex::Complex;

use crate::error::WalkError;
use crate::scalar::Real;

/// Step limit used when none is given; `HCWALK_MAX_STEPS` overrides it.
pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

/// Cumulative-probability rise below which a window counts as stalled.
pub const STALL_RISE: f64 = 1e-15;

/// Natural-log gap accepted by [`convergence_check`].
pub const CONVERGENCE_GAP: f64 = 0.1;

/// [`DEFAULT_MAX_STEPS`], unless `HCWALK_MAX_STEPS` holds a positive integer.
pub fn default_max_steps() -> u64 {
    std::env::var("HCWALK_MAX_STEPS")
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_MAX_STEPS)
}

/// A unitary step over some basis together with its target projector.
pub trait Evolution<R: Real> {
    fn dimension(&self) -> usize;

    /// Normalized start state (no amplitude on target states).
    fn initial_state(&self) -> Vec<Complex<R>>;

    /// `out = U psi`; `out` is fully overwritten.
    fn apply(&self, psi: &[Complex<R>], out: &mut [Complex<R>]);

    fn is_target(&self, i: usize) -> bool;

    /// Steps without measurable progress after which the walk is declared
    /// dark.
    fn stall_window(&self) -> u64 {
        10 * self.dimension() as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HittingSummary<R> {
    /// First step at which the cumulative hit probability reached `p0`.
    pub t_c: Option<u64>,
    /// `Σ t·p(t)` up to `t_c` (or up to the last step run).
    pub tau_q: R,
    pub p_total: R,
    pub steps_run: u64,
    /// `p0` was reached.
    pub converged: bool,
    /// The cumulative probability stalled below `p0`.
    pub dark: bool,
}

/// Stepwise measured evolution; [`MeasuredWalk::step`] returns `p(t)`.
pub struct MeasuredWalk<'a, R: Real, E: Evolution<R> + ?Sized> {
    evolution: &'a E,
    state: Vec<Complex<R>>,
    scratch: Vec<Complex<R>>,
    target: Vec<usize>,
    t: u64,
}

impl<'a, R: Real, E: Evolution<R> + ?Sized> MeasuredWalk<'a, R, E> {
    pub fn new(evolution: &'a E) -> Self {
        let n = evolution.dimension();
        let target = (0..n).filter(|&i| evolution.is_target(i)).collect();
        Self {
            evolution,
            state: evolution.initial_state(),
            scratch: vec![Complex::new(R::zero(), R::zero()); n],
            target,
            t: 0,
        }
    }

    /// Unnormalized conditional state after the last step.
    pub fn state(&self) -> &[Complex<R>] {
        &self.state
    }

    pub fn time(&self) -> u64 {
        self.t
    }

    /// Advances one step and returns the probability of finding the walker
    /// at the target at this step.
    pub fn step(&mut self) -> R {
        self.evolution.apply(&self.state, &mut self.scratch);
        std::mem::swap(&mut self.state, &mut self.scratch);
        let mut hit = R::zero();
        for &i in &self.target {
            hit = hit + self.state[i].norm_sqr();
            self.state[i] = Complex::new(R::zero(), R::zero());
        }
        self.t += 1;
        hit
    }

    pub fn norm_sqr(&self) -> R {
        self.state
            .iter()
            .map(|a| a.norm_sqr())
            .fold(R::zero(), |a, b| a + b)
    }
}

fn check_p0<R: Real>(p0: R) -> Result<(), WalkError> {
    if p0 > R::zero() && p0 < R::one() {
        Ok(())
    } else {
        Err(WalkError::InvalidParameter(format!(
            "p0 must lie in (0, 1), got {p0}"
        )))
    }
}

/// Runs the measured walk until the cumulative hit probability reaches
/// `p0`, the walk stalls, or `max_steps` is exhausted.
pub fn run_measured_walk<R: Real, E: Evolution<R> + ?Sized>(
    evolution: &E,
    p0: R,
    max_steps: u64,
) -> Result<HittingSummary<R>, WalkError> {
    run_with_observer(evolution, p0, max_steps, |_, _, _| {})
}

/// As [`run_measured_walk`], also returning `(t, p(t), cumulative)` rows.
pub fn run_measured_walk_traced<R: Real, E: Evolution<R> + ?Sized>(
    evolution: &E,
    p0: R,
    max_steps: u64,
) -> Result<(HittingSummary<R>, Vec<(u64, R, R)>), WalkError> {
    let mut trace = Vec::new();
    let summary = run_with_observer(evolution, p0, max_steps, |t, p, cum| {
        trace.push((t, p, cum))
    })?;
    Ok((summary, trace))
}

/// `p(1), .., p(steps)` with no stopping rule.
pub fn hit_probabilities<R: Real, E: Evolution<R> + ?Sized>(evolution: &E, steps: u64) -> Vec<R> {
    let mut walk = MeasuredWalk::new(evolution);
    (0..steps).map(|_| walk.step()).collect()
}

fn run_with_observer<R: Real, E: Evolution<R> + ?Sized>(
    evolution: &E,
    p0: R,
    max_steps: u64,
    mut observe: impl FnMut(u64, R, R),
) -> Result<HittingSummary<R>, WalkError> {
    check_p0(p0)?;
    if max_steps == 0 {
        return Err(WalkError::InvalidParameter("max_steps must be >= 1".into()));
    }
    let window = evolution.stall_window().max(1);
    let stall = R::lit(STALL_RISE).max(R::epsilon());
    let mut walk = MeasuredWalk::new(evolution);
    let (mut cum, mut tau) = (R::zero(), R::zero());
    let mut checkpoint = R::zero();
    while walk.time() < max_steps {
        let p = walk.step();
        let t = walk.time();
        cum = cum + p;
        tau = tau + R::lit(t as f64) * p;
        observe(t, p, cum);
        if cum >= p0 {
            return Ok(HittingSummary {
                t_c: Some(t),
                tau_q: tau,
                p_total: cum,
                steps_run: t,
                converged: true,
                dark: false,
            });
        }
        if t.is_multiple_of(window) {
            if cum - checkpoint < stall {
                return Ok(HittingSummary {
                    t_c: None,
                    tau_q: tau,
                    p_total: cum,
                    steps_run: t,
                    converged: false,
                    dark: true,
                });
            }
            checkpoint = cum;
        }
    }
    Err(WalkError::MaxStepsExceeded {
        steps: walk.time(),
        reached: cum.to_f64().unwrap_or(f64::NAN),
        tau_partial: tau.to_f64().unwrap_or(f64::NAN),
    })
}

/// `Σ t·p(t) / Σ p(t)`, run until the cumulative probability is
/// indistinguishable from one or plateaus. Returns `(τ̃, p_total)`.
pub fn conditional_hitting<R: Real, E: Evolution<R> + ?Sized>(
    evolution: &E,
    max_steps: u64,
) -> Result<(R, R), WalkError> {
    let slack = R::lit(1e-10).max(R::epsilon() * R::lit(100.0));
    match run_measured_walk(evolution, R::one() - slack, max_steps) {
        Ok(s) if s.p_total > R::zero() => Ok((s.tau_q / s.p_total, s.p_total)),
        Ok(s) => Err(WalkError::NoPlateau { steps: s.steps_run }),
        Err(WalkError::MaxStepsExceeded { steps, .. }) => Err(WalkError::NoPlateau { steps }),
        Err(e) => Err(e),
    }
}

/// `ln τ(1−ε/2) − ln τ(1−ε) < 0.1`.
pub fn convergence_check<R: Real>(tau_at_eps: R, tau_at_half_eps: R) -> bool {
    if tau_at_eps <= R::zero() || tau_at_half_eps <= R::zero() {
        return false;
    }
    tau_at_half_eps.ln() - tau_at_eps.ln() < R::lit(CONVERGENCE_GAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduced::WalkOperator;
    use crate::topology::WalkTopology;

    fn bare(d: usize) -> WalkOperator<f64> {
        WalkOperator::for_topology(&WalkTopology::bare(d).unwrap()).unwrap()
    }

    #[test]
    fn bare_hand_calculations() {
        let s = run_measured_walk(&bare(1), 0.999, 100).unwrap();
        assert_eq!((s.t_c, s.tau_q, s.p_total), (Some(1), 1.0, 1.0));
        let s = run_measured_walk(&bare(2), 0.999, 100).unwrap();
        assert_eq!(s.t_c, Some(2));
        assert!((s.tau_q - 2.0).abs() < 1e-14);
        let p = hit_probabilities(&bare(2), 2);
        assert!(p[0].abs() < 1e-15 && (p[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn step_limit() {
        match run_measured_walk(&bare(8), 0.999, 3) {
            Err(WalkError::MaxStepsExceeded { steps, reached, .. }) => {
                assert_eq!(steps, 3);
                assert!(reached < 0.999);
            }
            other => panic!("{other:?}"),
        }
        assert!(run_measured_walk(&bare(3), 1.0, 10).is_err());
        assert!(run_measured_walk(&bare(3), 0.5, 0).is_err());
    }

    #[test]
    fn conditional_collapses_without_dark_states() {
        let op = bare(6);
        let (tilde, p) = conditional_hitting(&op, 1_000_000).unwrap();
        assert!(p > 1.0 - 1e-9);
        let s = run_measured_walk(&op, 1.0 - 1e-10, 1_000_000).unwrap();
        assert!((tilde - s.tau_q).abs() / s.tau_q < 1e-6);
    }

    #[test]
    fn convergence_threshold() {
        assert!(convergence_check(100.0, 100.0));
        assert!(!convergence_check(100.0, 112.0));
        assert!(!convergence_check(0.0, 1.0));
    }
}
