//! Plot data for the figures: one CSV per curve.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hcwalk::{rational_to_f64, WalkMode, WalkTopology};

use crate::plan::Point;
use crate::run::{evaluate_all, Options, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureName {
    Fig2,
    Fig4,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scale {
    /// Capped sizes that finish on a workstation.
    Desk,
    /// The parameter ranges of the published figures.
    Full,
}

/// What a curve file reports besides its x axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Columns {
    /// `T_c` and `τ_q` against ε.
    Epsilon,
    /// Classical and quantum hitting times plus `D_red`.
    Both,
    /// Quantum only.
    Quantum,
}

#[derive(Debug, Clone)]
pub struct Curve {
    pub file: String,
    axis: &'static str,
    columns: Columns,
    points: Vec<(String, Point)>,
}

const EPS: f64 = 1e-4;

fn eps_grid() -> Vec<f64> {
    // 1e-1 .. 1e-4, four points per decade
    (4..=16).map(|k| 10f64.powf(-(k as f64) / 4.0)).collect()
}

fn tails(d: usize, n: usize, q: usize) -> Point {
    Point {
        topology: WalkTopology::tails(d, n, q).unwrap(),
        eps: EPS,
    }
}

fn concat(dims: Vec<usize>, mode: WalkMode) -> Point {
    Point {
        topology: WalkTopology::concatenated(dims, mode).unwrap(),
        eps: EPS,
    }
}

fn curve(
    file: String,
    axis: &'static str,
    columns: Columns,
    xs: impl IntoIterator<Item = usize>,
    point: impl Fn(usize) -> Point,
) -> Curve {
    Curve {
        file,
        axis,
        columns,
        points: xs.into_iter().map(|x| (x.to_string(), point(x))).collect(),
    }
}

/// The curves making up `name` at `scale`.
pub fn curves(name: FigureName, scale: Scale) -> Vec<Curve> {
    let desk = scale == Scale::Desk;
    match name {
        FigureName::Fig2 => {
            let ds: &[usize] = if desk { &[5, 10, 15] } else { &[5, 10, 15, 20, 25] };
            ds.iter()
                .map(|&d| Curve {
                    file: format!("fig2_d{d}"),
                    axis: "eps",
                    columns: Columns::Epsilon,
                    points: eps_grid()
                        .into_iter()
                        .map(|eps| {
                            let topology = WalkTopology::bare(d).unwrap();
                            (format!("{eps:e}"), Point { topology, eps })
                        })
                        .collect(),
                })
                .collect()
        }
        FigureName::Fig4 => {
            let dmax = if desk { 16 } else { 50 };
            [(50, 5), (30, 3), (10, 1)]
                .into_iter()
                .map(|(n, q)| {
                    curve(format!("fig4_n{n}_q{q}"), "d", Columns::Both, 1..=dmax, |d| {
                        tails(d, n, q)
                    })
                })
                .collect()
        }
        FigureName::Fig6 => {
            let pairs: &[(usize, usize)] = if desk {
                &[(5, 10), (10, 15)]
            } else {
                &[(15, 20), (10, 15), (5, 10)]
            };
            let ns = if desk { 0..=50 } else { 0..=100 };
            pairs
                .iter()
                .map(|&(d, q)| {
                    let xs = ns.clone().step_by(5);
                    curve(format!("fig6_d{d}_q{q}"), "n", Columns::Quantum, xs, |n| {
                        tails(d, n, q)
                    })
                })
                .collect()
        }
        FigureName::Fig7 => {
            let pairs: &[(usize, usize)] = if desk {
                &[(5, 25), (10, 50)]
            } else {
                &[(15, 75), (10, 50), (5, 25)]
            };
            let qmax = if desk { 20 } else { 40 };
            pairs
                .iter()
                .map(|&(d, n)| {
                    let xs = (0..=qmax).step_by(2);
                    curve(format!("fig7_d{d}_n{n}"), "q", Columns::Quantum, xs, |q| {
                        tails(d, n, q)
                    })
                })
                .collect()
        }
        FigureName::Fig8 => {
            let mmax = if desk { 5 } else { 7 };
            vec![curve("fig8_d2".into(), "m", Columns::Both, 1..=mmax, |m| {
                concat(vec![2; m + 1], WalkMode::CentralCornerToCorner)
            })]
        }
        FigureName::Fig9 => {
            let dmax = if desk { 9 } else { 20 };
            vec![curve("fig9_m1".into(), "d", Columns::Both, 1..=dmax, |d| {
                concat(vec![d; 2], WalkMode::PenetrateFull)
            })]
        }
    }
}

impl Curve {
    fn header(&self) -> Vec<&str> {
        let mut h = vec![self.axis];
        h.extend_from_slice(match self.columns {
            Columns::Epsilon => &["t_c", "tau_q"][..],
            Columns::Both => &["tau_classical", "tau_classical_approx", "tau_q", "D_red"][..],
            Columns::Quantum => &["tau_q", "D_red"][..],
        });
        h.extend_from_slice(&["converged", "dark", "error"]);
        h
    }

    fn options(&self) -> Options {
        Options {
            classical: self.columns == Columns::Both,
            quantum: true,
            verify_convergence: false,
            oracle: false,
        }
    }

    fn record(&self, x: &str, row: &Row) -> Vec<String> {
        let q = row.quantum.as_ref();
        let tau_q = q.map(|q| format!("{:.10e}", q.tau_q)).unwrap_or_default();
        let d_red = row.topology.reduced_dimension().to_string();
        let mut r = vec![x.to_string()];
        match self.columns {
            Columns::Epsilon => {
                r.push(q.and_then(|q| q.t_c).map(|t| t.to_string()).unwrap_or_default());
                r.push(tau_q);
            }
            Columns::Both => {
                r.push(row.classical_string());
                r.push(
                    row.classical
                        .as_ref()
                        .map(|c| format!("{:.10e}", rational_to_f64(c)))
                        .unwrap_or_default(),
                );
                r.push(tau_q);
                r.push(d_red);
            }
            Columns::Quantum => {
                r.push(tau_q);
                r.push(d_red);
            }
        }
        r.push(q.map(|q| q.converged.to_string()).unwrap_or_default());
        r.push(q.map(|q| q.dark.to_string()).unwrap_or_default());
        r.push(row.error.clone().unwrap_or_default());
        r
    }

    /// Computes the curve and writes `<dir>/<file>.csv`. Returns the path
    /// and whether every point succeeded.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, bool)> {
        let points: Vec<Point> = self.points.iter().map(|(_, p)| p.clone()).collect();
        let rows = evaluate_all(&points, self.options());
        let path = dir.join(format!("{}.csv", self.file));
        let mut w = csv::Writer::from_path(&path)
            .with_context(|| format!("cannot write {}", path.display()))?;
        w.write_record(self.header())?;
        for ((x, _), row) in self.points.iter().zip(&rows) {
            w.write_record(self.record(x, row))?;
        }
        w.flush()?;
        Ok((path, rows.iter().all(Row::ok)))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }
}
