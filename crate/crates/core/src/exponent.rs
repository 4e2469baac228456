//! Counting functions `N(T) = #{k <= T}` and estimates of the critical
//! exponent `δ` from power-law growth `N(T) ~ c T^δ`.

use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact::{from_f64, to_f64, Rational};

/// Minimum number of points with `N >= 1` inside a fit window.
pub const MIN_FIT_POINTS: usize = 8;

/// Sampled counting function with truncation metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct CountCurve {
    /// `(T, N)` pairs, strictly increasing in `T`, nondecreasing in `N`.
    pub points: Vec<(f64, u64)>,
    /// Some counts may be incomplete.
    pub truncated: bool,
    /// Counts are exact for `T` up to this value when truncated.
    pub complete_to: Option<f64>,
    /// Free-form description of the data source.
    pub source: String,
}

impl CountCurve {
    pub fn new(points: Vec<(f64, u64)>) -> Result<Self> {
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidArgument("grid must be strictly increasing".into()));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::InvalidArgument("counts must be nondecreasing".into()));
            }
        }
        if points.iter().any(|p| !(p.0 > 0.0 && p.0.is_finite())) {
            return Err(Error::InvalidArgument("grid values must be positive and finite".into()));
        }
        Ok(CountCurve { points, truncated: false, complete_to: None, source: String::new() })
    }

    pub fn with_truncation(mut self, complete_to: Option<f64>) -> Self {
        self.truncated = true;
        self.complete_to = complete_to;
        self
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    /// `T,N` table preceded by `# key=value` metadata lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if !self.source.is_empty() {
            out.push_str(&format!("# source={}\n", self.source.replace('\n', " ")));
        }
        if self.truncated {
            out.push_str("# truncated=true\n");
            if let Some(c) = self.complete_to {
                out.push_str(&format!("# complete_to={c}\n"));
            }
        }
        out.push_str("T,N\n");
        for (t, n) in &self.points {
            out.push_str(&format!("{t},{n}\n"));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        let mut truncated = false;
        let mut complete_to = None;
        let mut source = String::new();
        let mut header_seen = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                if let Some((k, v)) = meta.trim().split_once('=') {
                    match k.trim() {
                        "truncated" => truncated = v.trim() == "true",
                        "complete_to" => {
                            complete_to = Some(v.trim().parse().map_err(|_| {
                                Error::Parse(format!("line {}: bad complete_to", lineno + 1))
                            })?)
                        }
                        "source" => source = v.trim().to_string(),
                        _ => {}
                    }
                }
                continue;
            }
            if !header_seen {
                if line.replace(' ', "") != "T,N" {
                    return Err(Error::Parse(format!("line {}: expected header `T,N`", lineno + 1)));
                }
                header_seen = true;
                continue;
            }
            let (t, n) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `T,N`", lineno + 1)))?;
            let t: f64 = t.trim().parse().map_err(|_| Error::Parse(format!("line {}: bad T", lineno + 1)))?;
            let n: u64 = n.trim().parse().map_err(|_| Error::Parse(format!("line {}: bad N", lineno + 1)))?;
            points.push((t, n));
        }
        if !header_seen {
            return Err(Error::Parse("missing header `T,N`".into()));
        }
        let mut curve = CountCurve::new(points)?.with_source(source);
        if truncated {
            curve = curve.with_truncation(complete_to);
        }
        Ok(curve)
    }
}

/// `N(T)` for each grid value; non-positive entries are ignored.
pub fn counting_function(curvatures: &[Rational], grid: &[f64]) -> Result<CountCurve> {
    let mut ks: Vec<&Rational> = curvatures.iter().filter(|k| k.is_positive()).collect();
    ks.sort();
    let mut points = Vec::with_capacity(grid.len());
    for &t in grid {
        let exact_t = from_f64(t).ok_or_else(|| Error::InvalidArgument(format!("grid value {t} is not finite")))?;
        let n = ks.partition_point(|k| **k <= exact_t);
        points.push((t, n as u64));
    }
    CountCurve::new(points)
}

/// Geometric grid from `lo` to `hi` in steps of `2^{1/4}`, always ending at `hi`.
pub fn default_grid(lo: f64, hi: f64) -> Vec<f64> {
    let step = 2f64.powf(0.25);
    let mut grid = Vec::new();
    let mut t = lo;
    while t < hi * (1.0 - 1e-12) {
        grid.push(t);
        t *= step;
    }
    grid.push(hi);
    grid
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimateMethod {
    LogLogFit,
    PowerSumBracket,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentEstimate {
    pub delta_hat: f64,
    pub stderr: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub method: EstimateMethod,
    /// `exp(intercept)`; no theoretical value is claimed.
    pub constant: f64,
    pub points_used: usize,
}

impl fmt::Display for ExponentEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let method = match self.method {
            EstimateMethod::LogLogFit => "loglog_fit",
            EstimateMethod::PowerSumBracket => "power_sum_bracket",
        };
        writeln!(f, "method = {method}")?;
        writeln!(f, "delta_hat = {:.6}", self.delta_hat)?;
        writeln!(f, "stderr = {:.6}", self.stderr)?;
        writeln!(f, "r2 = {:.6}", self.r_squared)?;
        writeln!(f, "constant = {:.6}", self.constant)?;
        writeln!(f, "points = {}", self.points_used)?;
        write!(f, "window = [{}, {}]", self.window.0, self.window.1)
    }
}

/// Least-squares slope of `log N` against `log T` over the top `decades`
/// decades of the curve.
pub fn fit_exponent(curve: &CountCurve, decades: f64) -> Result<ExponentEstimate> {
    if decades.is_nan() || decades <= 0.0 {
        return Err(Error::InvalidArgument("window must span a positive number of decades".into()));
    }
    let Some(&(t_hi, _)) = curve.points.last() else {
        return Err(Error::TooFewPoints { needed: MIN_FIT_POINTS, found: 0 });
    };
    let t_lo = t_hi / 10f64.powf(decades);
    if curve.truncated {
        let complete = curve.complete_to.unwrap_or(0.0);
        if complete < t_hi {
            return Err(Error::TruncatedWindow { window_hi: t_hi, complete_to: complete });
        }
    }
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|(t, n)| *t >= t_lo * (1.0 - 1e-12) && *n >= 1)
        .map(|(t, n)| (t.ln(), (*n as f64).ln()))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints { needed: MIN_FIT_POINTS, found: pts.len() });
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = (ssr / (m - 2.0) / sxx).sqrt();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ssr / syy };
    Ok(ExponentEstimate {
        delta_hat: slope,
        stderr,
        r_squared,
        window: (t_lo, t_hi),
        method: EstimateMethod::LogLogFit,
        constant: intercept.exp(),
        points_used: pts.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerSumBy {
    Radius,
    Curvature,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerSum {
    pub total: f64,
    /// Contribution of the smallest decade of radii.
    pub last_decade: f64,
    /// Contribution of the decade before it.
    pub previous_decade: f64,
    /// The last decade contributes more than the one before: `s` is below `δ`.
    pub tail_growing: bool,
}

/// `Σ r^s` over the data with tail trend. Non-positive entries are ignored.
pub fn power_sum(values: &[Rational], s: f64, by: PowerSumBy) -> Result<PowerSum> {
    if s.is_nan() || s <= 0.0 {
        return Err(Error::InvalidArgument("power-sum exponent must be positive".into()));
    }
    let radii: Vec<f64> = values
        .iter()
        .filter(|v| v.is_positive())
        .map(|v| match by {
            PowerSumBy::Radius => to_f64(v),
            PowerSumBy::Curvature => 1.0 / to_f64(v),
        })
        .collect();
    let total = radii.iter().map(|r| r.powf(s)).sum();
    let r_min = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let mut last = 0.0;
    let mut previous = 0.0;
    for &r in &radii {
        if r < 10.0 * r_min {
            last += r.powf(s);
        } else if r < 100.0 * r_min {
            previous += r.powf(s);
        }
    }
    Ok(PowerSum { total, last_decade: last, previous_decade: previous, tail_growing: last > previous })
}

/// Bracket `δ` between the largest `s` with a growing tail and the smallest
/// with a shrinking one, scanning `s` over `[lo, hi]` in `steps` steps.
pub fn power_sum_bracket(values: &[Rational], by: PowerSumBy, lo: f64, hi: f64, steps: usize) -> Result<ExponentEstimate> {
    if steps == 0 || !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidArgument("bracket needs 0 < lo < hi and at least one step".into()));
    }
    let mut below = lo;
    let mut above = hi;
    for i in 0..=steps {
        let s = lo + (hi - lo) * i as f64 / steps as f64;
        if power_sum(values, s, by)?.tail_growing {
            below = below.max(s);
        } else {
            above = above.min(s);
        }
    }
    Ok(ExponentEstimate {
        delta_hat: 0.5 * (below + above),
        stderr: 0.5 * (above - below).abs(),
        r_squared: f64::NAN,
        window: (lo, hi),
        method: EstimateMethod::PowerSumBracket,
        constant: f64::NAN,
        points_used: values.len(),
    })
}
