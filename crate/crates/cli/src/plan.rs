//! Sweep plans: a topology template, one swept parameter, and the engines
//! to run at each point.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use hcwalk::{WalkMode, WalkTopology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Engine {
    Classical,
    Quantum,
    Both,
}

impl Engine {
    pub fn classical(self) -> bool {
        matches!(self, Engine::Classical | Engine::Both)
    }

    pub fn quantum(self) -> bool {
        matches!(self, Engine::Quantum | Engine::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Bare,
    Tails,
    Concat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Central,
    Penetrate,
}

impl From<Mode> for WalkMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Central => WalkMode::CentralCornerToCorner,
            Mode::Penetrate => WalkMode::PenetrateFull,
        }
    }
}

/// A value list given as `a..b` (inclusive), `a..b:step`, or `a,b,c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Values<T>(pub Vec<T>);

impl FromStr for Values<usize> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((lo, rest)) = s.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (hi, step),
                None => (rest, "1"),
            };
            let int = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("not an integer: {v:?}"));
            let (lo, hi, step) = (int(lo)?, int(hi)?, int(step)?);
            if step == 0 || lo > hi {
                return Err(format!("empty range {s:?}"));
            }
            return Ok(Values((lo..=hi).step_by(step).collect()));
        }
        s.split(',')
            .map(|v| v.trim().parse::<usize>().map_err(|_| format!("not an integer: {v:?}")))
            .collect::<Result<_, _>>()
            .map(Values)
    }
}

impl FromStr for Values<f64> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|v| {
                let x = v.trim().parse::<f64>().map_err(|_| format!("not a number: {v:?}"))?;
                if x > 0.0 && x < 1.0 {
                    Ok(x)
                } else {
                    Err(format!("eps must lie in (0, 1), got {x}"))
                }
            })
            .collect::<Result<_, _>>()
            .map(Values)
    }
}

/// The parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Swept {
    D,
    N,
    Q,
    M,
    Eps,
}

impl fmt::Display for Swept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Swept::D => "d",
            Swept::N => "n",
            Swept::Q => "q",
            Swept::M => "m",
            Swept::Eps => "eps",
        })
    }
}

/// Topology fields as given on the command line; every field may be a
/// list, at most one of them with more than one value.
#[derive(Debug, Clone, Default)]
pub struct Template {
    pub kind: Option<Kind>,
    pub d: Option<Values<usize>>,
    pub n: Option<Values<usize>>,
    pub q: Option<Values<usize>>,
    pub m: Option<Values<usize>>,
    pub dims: Option<Vec<usize>>,
    pub mode: Option<Mode>,
    pub loops: bool,
}

/// One point of a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub topology: WalkTopology,
    pub eps: f64,
}

#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub points: Vec<Point>,
    pub swept: Option<Swept>,
    pub engine: Engine,
    pub verify_convergence: bool,
    pub oracle: bool,
}

fn strictly_increasing<T: PartialOrd>(v: &[T]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl Template {
    /// Instantiates the template for every swept value, in order.
    pub fn expand(&self, eps: &Values<f64>) -> Result<(Vec<Point>, Option<Swept>)> {
        let lists = [
            (Swept::D, self.d.as_ref().map(|v| v.0.len())),
            (Swept::N, self.n.as_ref().map(|v| v.0.len())),
            (Swept::Q, self.q.as_ref().map(|v| v.0.len())),
            (Swept::M, self.m.as_ref().map(|v| v.0.len())),
            (Swept::Eps, Some(eps.0.len())),
        ];
        let swept: Vec<Swept> = lists
            .iter()
            .filter(|(_, len)| len.is_some_and(|l| l > 1))
            .map(|&(s, _)| s)
            .collect();
        if swept.len() > 1 {
            bail!("at most one parameter may be swept, got {}", join(&swept));
        }
        let swept = swept.first().copied();
        let ok = match swept {
            Some(Swept::D) => strictly_increasing(&self.d.as_ref().unwrap().0),
            Some(Swept::N) => strictly_increasing(&self.n.as_ref().unwrap().0),
            Some(Swept::Q) => strictly_increasing(&self.q.as_ref().unwrap().0),
            Some(Swept::M) => strictly_increasing(&self.m.as_ref().unwrap().0),
            Some(Swept::Eps) => strictly_increasing(&eps.0),
            None => true,
        };
        if !ok {
            bail!("swept values must be strictly increasing");
        }

        let first = |v: &Option<Values<usize>>| v.as_ref().and_then(|v| v.0.first().copied());
        let mut points = Vec::new();
        let count = match swept {
            Some(Swept::D) => self.d.as_ref().unwrap().0.len(),
            Some(Swept::N) => self.n.as_ref().unwrap().0.len(),
            Some(Swept::Q) => self.q.as_ref().unwrap().0.len(),
            Some(Swept::M) => self.m.as_ref().unwrap().0.len(),
            Some(Swept::Eps) => eps.0.len(),
            None => 1,
        };
        for i in 0..count {
            let pick = |v: &Option<Values<usize>>, s: Swept| {
                if swept == Some(s) {
                    v.as_ref().map(|v| v.0[i])
                } else {
                    first(v)
                }
            };
            let topology = self.instantiate(
                pick(&self.d, Swept::D),
                pick(&self.n, Swept::N),
                pick(&self.q, Swept::Q),
                pick(&self.m, Swept::M),
            )?;
            let e = if swept == Some(Swept::Eps) {
                eps.0[i]
            } else {
                eps.0[0]
            };
            points.push(Point { topology, eps: e });
        }
        Ok((points, swept))
    }

    fn instantiate(
        &self,
        d: Option<usize>,
        n: Option<usize>,
        q: Option<usize>,
        m: Option<usize>,
    ) -> Result<WalkTopology> {
        let kind = self.kind.context("--kind is required")?;
        let need = |v: Option<usize>, flag: &str| {
            v.with_context(|| format!("--{flag} is required for this kind"))
        };
        let mode = self.mode.unwrap_or(Mode::Central);
        if kind != Kind::Concat && (self.mode.is_some() || self.dims.is_some() || m.is_some()) {
            bail!("--dims, --m and --mode apply to --kind concat only");
        }
        let t = match kind {
            Kind::Bare => WalkTopology::bare(need(d, "d")?)?,
            Kind::Tails => WalkTopology::tails(need(d, "d")?, need(n, "n")?, need(q, "q")?)?,
            Kind::Concat => {
                let dims = match (&self.dims, d, m) {
                    (Some(dims), None, None) => dims.clone(),
                    (None, Some(d), Some(m)) => vec![d; m + 1],
                    (Some(_), _, _) => bail!("--dims excludes --d/--dims-equal and --m"),
                    _ => bail!("concat needs --dims, or --dims-equal (or --d) with --m"),
                };
                WalkTopology::concatenated(dims, mode.into())?
            }
        };
        Ok(t.with_self_loops(self.loops))
    }
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Reads topology lines (structured text, `#` comments, blank lines
/// ignored).
pub fn read_config(text: &str) -> Result<Vec<WalkTopology>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let t = line
            .parse::<WalkTopology>()
            .with_context(|| format!("line {}", i + 1))?;
        out.push(t);
    }
    if out.is_empty() {
        bail!("config holds no topology");
    }
    Ok(out)
}
