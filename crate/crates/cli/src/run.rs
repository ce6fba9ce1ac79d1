//! Evaluates plan points and writes the result rows.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use hcwalk::reduced::{hit_probabilities, run_measured_walk_traced};
use hcwalk::{
    build_explicit_graph, build_full_walk, classical_hitting, convergence_check,
    default_max_steps, markov_first_passage, run_measured_walk, ExactRational, FullWalk64,
    TopologyKind, WalkMode, WalkOperator64, WalkTopology,
};
use rayon::prelude::*;

use crate::plan::{Point, SweepPlan};

pub const HEADER: [&str; 16] = [
    "kind",
    "d",
    "n",
    "q",
    "dims",
    "mode",
    "eps",
    "tau_classical",
    "tau_q",
    "t_c",
    "p_total",
    "D_red",
    "dark",
    "converged",
    "seconds",
    "error",
];

/// Steps compared between the reduced and the full walk under `--oracle`.
const ORACLE_STEPS: u64 = 200;
const ORACLE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Default)]
pub struct QuantumResult {
    pub tau_q: f64,
    pub t_c: Option<u64>,
    pub p_total: f64,
    pub dark: bool,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub topology: WalkTopology,
    pub eps: f64,
    pub classical: Option<ExactRational>,
    pub quantum: Option<QuantumResult>,
    pub seconds: f64,
    pub error: Option<String>,
}

impl Row {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }

    pub fn classical_string(&self) -> String {
        self.classical.as_ref().map(|c| c.to_string()).unwrap_or_default()
    }

    pub fn record(&self) -> Vec<String> {
        let t = &self.topology;
        let (kind, mode) = match t.kind() {
            TopologyKind::Bare => ("bare", ""),
            TopologyKind::Tails => ("tails", ""),
            TopologyKind::Concatenated => (
                "concat",
                match t.mode() {
                    WalkMode::CentralCornerToCorner => "central",
                    WalkMode::PenetrateFull => "penetrate",
                },
            ),
        };
        let tails = t.kind() == TopologyKind::Tails;
        let opt = |show: bool, v: usize| if show { v.to_string() } else { String::new() };
        let dims = t.dims().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        let q = self.quantum.as_ref();
        vec![
            kind.to_string(),
            t.d().to_string(),
            opt(tails, t.n()),
            opt(tails, t.q()),
            dims,
            mode.to_string(),
            if q.is_some() { format!("{:e}", self.eps) } else { String::new() },
            self.classical_string(),
            q.map(|q| format!("{:.10e}", q.tau_q)).unwrap_or_default(),
            q.and_then(|q| q.t_c).map(|t| t.to_string()).unwrap_or_default(),
            q.map(|q| format!("{:.12}", q.p_total)).unwrap_or_default(),
            t.reduced_dimension().to_string(),
            q.map(|q| q.dark.to_string()).unwrap_or_default(),
            q.map(|q| q.converged.to_string()).unwrap_or_default(),
            format!("{:.3}", self.seconds),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// Flags shared by every point of a run.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub classical: bool,
    pub quantum: bool,
    pub verify_convergence: bool,
    pub oracle: bool,
}

impl From<&SweepPlan> for Options {
    fn from(p: &SweepPlan) -> Self {
        Self {
            classical: p.engine.classical(),
            quantum: p.engine.quantum(),
            verify_convergence: p.verify_convergence,
            oracle: p.oracle,
        }
    }
}

fn classical_point(t: &WalkTopology, oracle: bool) -> Result<ExactRational> {
    let tau = classical_hitting(t)?;
    if oracle {
        let graph = build_explicit_graph(t, true)?;
        let check: ExactRational = markov_first_passage(&graph)?;
        anyhow::ensure!(check == tau, "oracle mismatch: closed form {tau}, first passage {check}");
    }
    Ok(tau)
}

fn quantum_point(t: &WalkTopology, eps: f64, opts: Options) -> Result<QuantumResult> {
    let op = WalkOperator64::for_topology(t)?;
    let max_steps = default_max_steps();
    let s = run_measured_walk(&op, 1.0 - eps, max_steps)?;
    let mut converged = s.converged;
    if opts.verify_convergence && converged {
        let half = run_measured_walk(&op, 1.0 - eps / 2.0, max_steps)?;
        converged = half.converged && convergence_check(s.tau_q, half.tau_q);
    }
    if opts.oracle {
        let full: FullWalk64 = build_full_walk(t)?;
        let a = hit_probabilities(&op, ORACLE_STEPS);
        let b = hit_probabilities(&full, ORACLE_STEPS);
        let dev = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        anyhow::ensure!(
            dev < ORACLE_TOLERANCE,
            "oracle mismatch: reduced and full walk differ by {dev:e}"
        );
    }
    Ok(QuantumResult {
        tau_q: s.tau_q,
        t_c: s.t_c,
        p_total: s.p_total,
        dark: s.dark,
        converged,
    })
}

pub fn evaluate(point: &Point, opts: Options) -> Row {
    let start = Instant::now();
    let mut errors = Vec::new();
    let classical = if opts.classical {
        classical_point(&point.topology, opts.oracle)
            .map_err(|e| errors.push(format!("classical: {e:#}")))
            .ok()
    } else {
        None
    };
    let quantum = if opts.quantum {
        quantum_point(&point.topology, point.eps, opts)
            .map_err(|e| errors.push(format!("quantum: {e:#}")))
            .ok()
    } else {
        None
    };
    Row {
        topology: point.topology.clone(),
        eps: point.eps,
        classical,
        quantum,
        seconds: start.elapsed().as_secs_f64(),
        error: (!errors.is_empty()).then(|| errors.join("; ")),
    }
}

/// Evaluates every point (in parallel) and returns rows in plan order.
pub fn evaluate_all(points: &[Point], opts: Options) -> Vec<Row> {
    points.par_iter().map(|p| evaluate(p, opts)).collect()
}

pub fn write_rows<W: Write>(out: W, rows: &[Row]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `t,p,cumulative` for a single quantum run.
pub fn write_trace(path: &Path, t: &WalkTopology, eps: f64) -> Result<()> {
    let op = WalkOperator64::for_topology(t)?;
    let (_, trace) = run_measured_walk_traced(&op, 1.0 - eps, default_max_steps())?;
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    w.write_record(["t", "p", "cumulative"])?;
    for (t, p, cum) in trace {
        w.write_record([t.to_string(), format!("{p:.16e}"), format!("{cum:.16e}")])?;
    }
    w.flush()?;
    Ok(())
}
