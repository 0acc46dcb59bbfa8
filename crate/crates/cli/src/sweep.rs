//! Parameter-grid sweeps: range syntax, config files, and the grid walk.
//!
//! Axes accept `start:stop:count` (a bare value is a one-point axis). Rows
//! are produced in lexicographic grid order over `(c1, c2, b)`.

use std::fmt;
use std::fs;
use std::path::Path;

use samuelson::model::{ModelParams, ValidationMode};

/// Largest admissible grid.
pub const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Debug)]
pub struct SweepError(pub String);

impl fmt::Display for SweepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AxisRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisRange {
    /// Parse `start:stop:count` or a bare scalar (a one-point axis).
    pub fn parse(text: &str) -> Result<Self, SweepError> {
        let bad = |t: &str| SweepError(format!("invalid axis range '{t}': expected VALUE or START:STOP:COUNT"));
        let parts: Vec<&str> = text.split(':').collect();
        match parts.as_slice() {
            [value] => {
                let v: f64 = value.trim().parse().map_err(|_| bad(text))?;
                Ok(AxisRange { start: v, stop: v, count: 1 })
            }
            [start, stop, count] => {
                let start: f64 = start.trim().parse().map_err(|_| bad(text))?;
                let stop: f64 = stop.trim().parse().map_err(|_| bad(text))?;
                let count: usize = count.trim().parse().map_err(|_| bad(text))?;
                if count == 0 {
                    return Err(SweepError(format!("axis '{text}' must have count >= 1")));
                }
                if count == 1 && start != stop {
                    return Err(SweepError(format!(
                        "axis '{text}' has count 1 but distinct endpoints"
                    )));
                }
                Ok(AxisRange { start, stop, count })
            }
            _ => Err(bad(text)),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

/// Which per-point analyses a sweep runs.
#[derive(Clone, Copy, Debug)]
pub struct Analyses {
    pub equilibrium: bool,
    pub stability: bool,
}

impl Analyses {
    pub fn parse(text: &str) -> Result<Self, SweepError> {
        let mut out = Analyses { equilibrium: false, stability: false };
        for part in text.split(',') {
            match part.trim() {
                "equilibrium" => out.equilibrium = true,
                "stability" => out.stability = true,
                other => {
                    return Err(SweepError(format!(
                        "unknown analysis '{other}': expected equilibrium and/or stability"
                    )))
                }
            }
        }
        if !out.equilibrium && !out.stability {
            return Err(SweepError("at least one analysis must be selected".into()));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub c1: AxisRange,
    pub c2: AxisRange,
    pub b: AxisRange,
    pub p: f64,
    pub theta: Option<f64>,
    pub mode: ValidationMode,
    pub analyses: Analyses,
}

impl SweepSpec {
    /// Read a plain-text `key=value` spec. Recognized keys: `c1`, `c2`, `b`,
    /// `p`, `theta`, `mode`, `analyses`. Blank lines and `#` comments are
    /// skipped.
    pub fn from_config(path: &Path) -> Result<Self, SweepError> {
        let text = fs::read_to_string(path)
            .map_err(|e| SweepError(format!("cannot read config {}: {e}", path.display())))?;
        let mut c1 = None;
        let mut c2 = None;
        let mut b = None;
        let mut p = None;
        let mut theta = None;
        let mut mode = ValidationMode::Strict;
        let mut analyses = Analyses { equilibrium: true, stability: true };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                SweepError(format!("config line {}: expected key=value, got '{line}'", lineno + 1))
            })?;
            let value = value.trim();
            match key.trim() {
                "c1" => c1 = Some(AxisRange::parse(value)?),
                "c2" => c2 = Some(AxisRange::parse(value)?),
                "b" => b = Some(AxisRange::parse(value)?),
                "p" | "P" => {
                    p = Some(value.parse().map_err(|_| {
                        SweepError(format!("config line {}: invalid P '{value}'", lineno + 1))
                    })?)
                }
                "theta" => {
                    theta = Some(value.parse().map_err(|_| {
                        SweepError(format!("config line {}: invalid theta '{value}'", lineno + 1))
                    })?)
                }
                "mode" => {
                    mode = match value {
                        "strict" => ValidationMode::Strict,
                        "extended" => ValidationMode::Extended,
                        other => {
                            return Err(SweepError(format!(
                                "config line {}: unknown mode '{other}'",
                                lineno + 1
                            )))
                        }
                    }
                }
                "analyses" => analyses = Analyses::parse(value)?,
                other => {
                    return Err(SweepError(format!(
                        "config line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }
        let missing = |name: &str| SweepError(format!("config is missing required key '{name}'"));
        Ok(SweepSpec {
            c1: c1.ok_or_else(|| missing("c1"))?,
            c2: c2.ok_or_else(|| missing("c2"))?,
            b: b.ok_or_else(|| missing("b"))?,
            p: p.ok_or_else(|| missing("p"))?,
            theta,
            mode,
            analyses,
        })
    }

    pub fn grid_size(&self) -> usize {
        self.c1.count * self.c2.count * self.b.count
    }

    /// Grid points in lexicographic `(c1, c2, b)` order, validated upfront
    /// so a sweep either runs completely or not at all.
    pub fn grid(&self) -> Result<Vec<ModelParams<f64>>, SweepError> {
        if self.grid_size() > MAX_GRID_POINTS {
            return Err(SweepError(format!(
                "grid has {} points, above the {MAX_GRID_POINTS} guard",
                self.grid_size()
            )));
        }
        let mut points = Vec::with_capacity(self.grid_size());
        for &c1 in &self.c1.values() {
            for &c2 in &self.c2.values() {
                for &b in &self.b.values() {
                    let params =
                        ModelParams::new(c1, c2, b, self.p, self.mode).map_err(|e| {
                            SweepError(format!(
                                "grid point c1={c1}, c2={c2}, b={b} is invalid: {e}"
                            ))
                        })?;
                    points.push(params);
                }
            }
        }
        Ok(points)
    }
}
