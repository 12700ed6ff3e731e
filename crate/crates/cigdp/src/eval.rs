//! Run evaluation: optimality gaps, primal-integral scores, performance
//! profiles, paired signed-rank tests, and grouped summary tables.
//!
//! Everything here aggregates immutable run records; functions that can
//! encounter recoverable oddities (late trace points, missing cells,
//! zero optima) push typed warnings instead of failing, so a report is
//! always produced and the caller decides how loudly to complain.

use crate::instance::TracePoint;
use statrs::distribution::{ContinuousCDF, Normal};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("bad evaluation input: {0}")]
    BadInput(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalWarning {
    /// A trace point claimed a time past the evaluation horizon.
    TraceTimeClamped { at: f64, horizon: f64 },
    /// An instance lacked a value for some heuristic and was dropped
    /// from the profile.
    MissingCell { instance: String, heuristic: String },
    /// Positive crossings against a zero optimum: the ratio is
    /// undefined and the run is excluded from gap means.
    UndefinedGap { instance: String, heuristic: String },
    /// The primal integral needs a positive best value and horizon.
    NoIntegral { instance: String, reason: &'static str },
    /// The instance label didn't follow the grouping pattern.
    UnparsedGroup { instance: String },
}

impl fmt::Display for EvalWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalWarning::TraceTimeClamped { at, horizon } => {
                write!(f, "trace time {at:.3}s exceeds the horizon {horizon:.3}s; clamped")
            }
            EvalWarning::MissingCell { instance, heuristic } => {
                write!(f, "{instance}: no value for {heuristic}; instance dropped from profile")
            }
            EvalWarning::UndefinedGap { instance, heuristic } => {
                write!(f, "{instance}/{heuristic}: positive value against a zero optimum")
            }
            EvalWarning::NoIntegral { instance, reason } => {
                write!(f, "{instance}: primal integral skipped ({reason})")
            }
            EvalWarning::UnparsedGroup { instance } => {
                write!(f, "{instance}: label does not parse into grouping keys")
            }
        }
    }
}

/// Relative excess over the optimum. `None` marks the undefined case of
/// a positive value against a zero optimum; zero against zero is a
/// perfect gap of 0.
pub fn gap(heuristic: u64, optimal: u64) -> Option<f64> {
    match (heuristic, optimal) {
        (0, 0) => Some(0.0),
        (_, 0) => None,
        (h, o) => Some((h as f64 - o as f64) / o as f64),
    }
}

/// Reference-value headroom: the integral starts from 1.1 times the
/// best value, and only incumbents strictly below that line count.
pub const PRIMAL_HEADROOM: f64 = 1.1;

/// Normalized primal integral of one incumbent trace against the best
/// value over all compared runs (`f_star`) and the slowest run's wall
/// time (`t_max`). The piecewise-constant incumbent curve starts at
/// `1.1 * f_star` and is integrated over `[0, t_max]`, normalized by
/// `t_max * f_star`; the result lives in `[1.0, 1.1]` whenever `f_star`
/// is truly the minimum. Trace points after the horizon are clamped
/// onto it with a warning.
pub fn npi(
    trace: &[TracePoint],
    f_star: u64,
    t_max: f64,
    warnings: &mut Vec<EvalWarning>,
) -> Result<f64, EvalError> {
    if f_star == 0 {
        return Err(EvalError::BadInput("best value must be positive"));
    }
    if !(t_max > 0.0) {
        return Err(EvalError::BadInput("horizon must be positive"));
    }
    let f0 = PRIMAL_HEADROOM * f_star as f64;
    let mut points: Vec<(f64, f64)> = trace
        .iter()
        .filter(|p| (p.value as f64) < f0)
        .map(|p| {
            let t = if p.seconds > t_max {
                warnings.push(EvalWarning::TraceTimeClamped {
                    at: p.seconds,
                    horizon: t_max,
                });
                t_max
            } else {
                p.seconds
            };
            (t, p.value as f64)
        })
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut integral = 0.0;
    let mut prev_t = 0.0;
    let mut prev_f = f0;
    for &(t, f) in &points {
        integral += prev_f * (t - prev_t);
        prev_t = t;
        prev_f = f;
    }
    integral += prev_f * (t_max - prev_t);
    Ok(integral / (t_max * f_star as f64))
}

/// Primal-gap integral: the time average of `(f(t) - f_star) / f(t)`
/// where `f(t)` is the incumbent at time `t` (gap 1 before the first
/// incumbent, 0 once the best value is reached). Lives in `[0, 1]`.
pub fn npi_alt(
    trace: &[TracePoint],
    f_star: u64,
    t_max: f64,
    warnings: &mut Vec<EvalWarning>,
) -> Result<f64, EvalError> {
    if !(t_max > 0.0) {
        return Err(EvalError::BadInput("horizon must be positive"));
    }
    let gap_at = |f: f64| {
        if f == 0.0 {
            0.0 // only reachable when f_star is 0 as well
        } else {
            (f - f_star as f64) / f
        }
    };
    let mut points: Vec<(f64, f64)> = trace
        .iter()
        .map(|p| {
            let t = if p.seconds > t_max {
                warnings.push(EvalWarning::TraceTimeClamped {
                    at: p.seconds,
                    horizon: t_max,
                });
                t_max
            } else {
                p.seconds
            };
            (t, p.value as f64)
        })
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut integral = 0.0;
    let mut prev_t = 0.0;
    let mut prev_gap = 1.0;
    for &(t, f) in &points {
        integral += prev_gap * (t - prev_t);
        prev_t = t;
        prev_gap = gap_at(f);
    }
    integral += prev_gap * (t_max - prev_t);
    Ok(integral / t_max)
}

/// One heuristic's profile curve: fraction of instances solved within a
/// factor τ of the per-instance best, per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub heuristic: String,
    pub points: Vec<(f64, f64)>,
}

/// Performance profiles over `(instance, heuristic) -> value` cells,
/// lower values better. Instances missing any heuristic are dropped
/// with a warning. A zero best value makes the ratio 1 for other zero
/// cells and unreachable (infinite) for positive ones.
pub fn performance_profile(
    cells: &BTreeMap<(String, String), f64>,
    taus: &[f64],
    warnings: &mut Vec<EvalWarning>,
) -> Vec<ProfileCurve> {
    let heuristics: BTreeSet<&String> = cells.keys().map(|(_, h)| h).collect();
    let instances: BTreeSet<&String> = cells.keys().map(|(i, _)| i).collect();

    let mut ratios: BTreeMap<&String, Vec<f64>> =
        heuristics.iter().map(|&h| (h, Vec::new())).collect();
    let mut kept = 0usize;
    'outer: for &inst in &instances {
        for &h in &heuristics {
            if !cells.contains_key(&(inst.clone(), h.clone())) {
                warnings.push(EvalWarning::MissingCell {
                    instance: inst.clone(),
                    heuristic: h.clone(),
                });
                continue 'outer;
            }
        }
        let best = heuristics
            .iter()
            .map(|&h| cells[&(inst.clone(), h.clone())])
            .fold(f64::INFINITY, f64::min);
        kept += 1;
        for &h in &heuristics {
            let v = cells[&(inst.clone(), h.clone())];
            let ratio = if best > 0.0 {
                v / best
            } else if v == 0.0 {
                1.0
            } else {
                f64::INFINITY
            };
            ratios.get_mut(h).unwrap().push(ratio);
        }
    }

    heuristics
        .iter()
        .map(|&h| {
            let rs = &ratios[h];
            let points = taus
                .iter()
                .map(|&tau| {
                    let n = rs.iter().filter(|&&r| r <= tau).count();
                    (tau, if kept == 0 { 0.0 } else { n as f64 / kept as f64 })
                })
                .collect();
            ProfileCurve {
                heuristic: h.clone(),
                points,
            }
        })
        .collect()
}

/// Evenly spaced τ grid from 1 to the worst finite ratio in the cells
/// (at least 1.05 wide so flat profiles still chart).
pub fn tau_grid(cells: &BTreeMap<(String, String), f64>, steps: usize) -> Vec<f64> {
    let mut per_instance: BTreeMap<&String, f64> = BTreeMap::new();
    for ((inst, _), &v) in cells {
        let e = per_instance.entry(inst).or_insert(f64::INFINITY);
        *e = e.min(v);
    }
    let mut worst = 1.05f64;
    for ((inst, _), &v) in cells {
        let best = per_instance[inst];
        if best > 0.0 {
            let r = v / best;
            if r.is_finite() {
                worst = worst.max(r);
            }
        }
    }
    let steps = steps.max(2);
    (0..=steps)
        .map(|k| 1.0 + (worst - 1.0) * k as f64 / steps as f64)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WilcoxonMethod {
    Exact,
    NormalApprox,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WilcoxonOutcome {
    /// Every pair tied: no evidence either way.
    NoTest,
    Tested {
        /// Smaller of the positive- and negative-rank sums.
        statistic: f64,
        p_value: f64,
        significant: bool,
        pairs_used: usize,
        method: WilcoxonMethod,
    },
}

const EXACT_LIMIT: usize = 25;
const ALPHA: f64 = 0.05;

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero
/// differences are dropped and tied magnitudes mid-ranked; up to 25
/// informative pairs the p-value comes from the exact sign-pattern
/// distribution, beyond that from the tie-corrected normal
/// approximation with continuity correction.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonOutcome, EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::BadInput("paired samples must have equal length"));
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    let n = diffs.len();
    if n == 0 {
        return Ok(WilcoxonOutcome::NoTest);
    }

    // Mid-ranks of |d|.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diffs[i].abs().total_cmp(&diffs[j].abs()));
    let mut ranks = vec![0.0f64; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && diffs[order[j + 1]].abs() == diffs[order[i]].abs() {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mid;
        }
        i = j + 1;
    }

    let w_plus: f64 = (0..n).filter(|&i| diffs[i] > 0.0).map(|i| ranks[i]).sum();
    let total: f64 = ranks.iter().sum();
    let w_minus = total - w_plus;
    let statistic = w_plus.min(w_minus);

    let (p, method) = if n <= EXACT_LIMIT {
        (exact_p(&ranks, statistic), WilcoxonMethod::Exact)
    } else {
        // Tie-corrected variance.
        let mut var = (n * (n + 1) * (2 * n + 1)) as f64 / 24.0;
        let mut i = 0;
        while i < n {
            let mut j = i;
            while j + 1 < n && diffs[order[j + 1]].abs() == diffs[order[i]].abs() {
                j += 1;
            }
            let t = (j - i + 1) as f64;
            var -= (t * t * t - t) / 48.0;
            i = j + 1;
        }
        let mean = (n * (n + 1)) as f64 / 4.0;
        let z = (statistic - mean + 0.5) / var.sqrt();
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        ((2.0 * normal.cdf(z)).min(1.0), WilcoxonMethod::NormalApprox)
    };

    Ok(WilcoxonOutcome::Tested {
        statistic,
        p_value: p,
        significant: p < ALPHA,
        pairs_used: n,
        method,
    })
}

/// P(W ≤ statistic or W ≥ total − statistic) over all 2^n equally
/// likely sign patterns. Mid-ranks are half-integers, so everything is
/// doubled into integer space for the tally.
fn exact_p(ranks: &[f64], statistic: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0u128; total + 1];
    counts[0] = 1;
    for &s in &doubled {
        for k in (s..=total).rev() {
            counts[k] += counts[k - s];
        }
    }
    let s_obs = (2.0 * statistic).round() as usize;
    let lo: u128 = counts[..=s_obs.min(total)].iter().sum();
    let hi: u128 = counts[(total - s_obs.min(total))..].iter().sum();
    let all: u128 = 1u128 << ranks.len();
    (((lo + hi) as f64) / (all as f64)).min(1.0)
}

/// Grouping key extracted from instance labels written as
/// `<stem>_L<layers>_r<density>_i<incremental>_d<dislocation>_s<seed>`
/// (extension and seed ignored; density and incremental fraction may be
/// absent for dense sets).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupKey {
    pub layers: u32,
    pub density: String,
    pub incremental: String,
    pub dislocation: u32,
}

pub fn parse_group(instance: &str) -> Option<GroupKey> {
    let stem = instance
        .rsplit('/')
        .next()
        .unwrap_or(instance)
        .trim_end_matches(".graph")
        .trim_end_matches(".sol");
    let mut layers = None;
    let mut density = String::from("-");
    let mut inc = String::from("-");
    let mut dislocation = None;
    for tok in stem.split('_') {
        if let Some(v) = tok.strip_prefix('L') {
            layers = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix('r') {
            if v.parse::<f64>().is_ok() {
                density = v.to_string();
            }
        } else if let Some(v) = tok.strip_prefix('i') {
            if v.parse::<f64>().is_ok() {
                inc = v.to_string();
            }
        } else if let Some(v) = tok.strip_prefix('d') {
            if let Ok(d) = v.parse() {
                dislocation = Some(d);
            }
        }
    }
    Some(GroupKey {
        layers: layers?,
        density,
        incremental: inc,
        dislocation: dislocation?,
    })
}

/// One finished run, as assembled from solution records and the batch
/// manifest.
#[derive(Debug, Clone)]
pub struct Observation {
    pub instance: String,
    pub heuristic: String,
    pub crossings: u64,
    pub seconds: f64,
    pub trace: Vec<TracePoint>,
}

/// Per-run metric values; `gap` is `None` when undefined, the integral
/// scores are `None` when the instance admitted no horizon or best
/// value.
#[derive(Debug, Clone)]
pub struct RunMetrics {
    pub instance: String,
    pub heuristic: String,
    pub crossings: u64,
    pub seconds: f64,
    pub gap: Option<f64>,
    /// Gap measured against the best known value rather than a proven
    /// optimum.
    pub bks_gap: bool,
    pub npi: Option<f64>,
    pub npi_alt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub group: GroupKey,
    pub heuristic: String,
    pub runs: usize,
    pub mean_gap: Option<f64>,
    pub undefined_gaps: usize,
    pub bks_runs: usize,
    pub mean_seconds: f64,
    pub mean_npi: Option<f64>,
    pub mean_npi_alt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricTable {
    pub rows: Vec<MetricRow>,
}

/// Score every run and fold the results into a grouped table. Gaps use
/// the proven optimum where `optima` has one, otherwise the best value
/// seen across the instance's runs (flagged per run). The integral
/// scores share one `f_star`/horizon per instance, taken over all its
/// runs.
pub fn evaluate_observations(
    observations: &[Observation],
    optima: &BTreeMap<String, u64>,
    warnings: &mut Vec<EvalWarning>,
) -> (Vec<RunMetrics>, MetricTable) {
    let mut by_instance: BTreeMap<&str, Vec<&Observation>> = BTreeMap::new();
    for o in observations {
        by_instance.entry(&o.instance).or_default().push(o);
    }

    let mut metrics = Vec::with_capacity(observations.len());
    for (inst, runs) in &by_instance {
        let f_star = runs.iter().map(|o| o.crossings).min().unwrap();
        let t_max = runs.iter().map(|o| o.seconds).fold(0.0f64, f64::max);
        let reference = optima.get(*inst).copied();
        for o in runs {
            let (g, bks) = match reference {
                Some(opt) => (gap(o.crossings, opt), false),
                None => (gap(o.crossings, f_star), true),
            };
            if g.is_none() {
                warnings.push(EvalWarning::UndefinedGap {
                    instance: o.instance.clone(),
                    heuristic: o.heuristic.clone(),
                });
            }
            let (v_npi, v_alt) = if f_star == 0 {
                warnings.push(EvalWarning::NoIntegral {
                    instance: o.instance.clone(),
                    reason: "best value is zero",
                });
                (None, None)
            } else if !(t_max > 0.0) {
                warnings.push(EvalWarning::NoIntegral {
                    instance: o.instance.clone(),
                    reason: "no positive horizon",
                });
                (None, None)
            } else {
                (
                    Some(npi(&o.trace, f_star, t_max, warnings).expect("inputs checked")),
                    Some(npi_alt(&o.trace, f_star, t_max, warnings).expect("inputs checked")),
                )
            };
            metrics.push(RunMetrics {
                instance: o.instance.clone(),
                heuristic: o.heuristic.clone(),
                crossings: o.crossings,
                seconds: o.seconds,
                gap: g,
                bks_gap: bks,
                npi: v_npi,
                npi_alt: v_alt,
            });
        }
    }

    let mut groups: BTreeMap<(GroupKey, String), Vec<&RunMetrics>> = BTreeMap::new();
    let mut unparsed: BTreeSet<String> = BTreeSet::new();
    for m in &metrics {
        let key = parse_group(&m.instance).unwrap_or_else(|| {
            unparsed.insert(m.instance.clone());
            GroupKey {
                layers: 0,
                density: "-".into(),
                incremental: "-".into(),
                dislocation: 0,
            }
        });
        groups.entry((key, m.heuristic.clone())).or_default().push(m);
    }
    for inst in unparsed {
        warnings.push(EvalWarning::UnparsedGroup { instance: inst });
    }

    let mean_opt = |vals: Vec<f64>| {
        if vals.is_empty() {
            None
        } else {
            Some(vals.iter().sum::<f64>() / vals.len() as f64)
        }
    };
    let rows = groups
        .into_iter()
        .map(|((group, heuristic), ms)| MetricRow {
            group,
            heuristic,
            runs: ms.len(),
            mean_gap: mean_opt(ms.iter().filter_map(|m| m.gap).collect()),
            undefined_gaps: ms.iter().filter(|m| m.gap.is_none()).count(),
            bks_runs: ms.iter().filter(|m| m.bks_gap).count(),
            mean_seconds: ms.iter().map(|m| m.seconds).sum::<f64>() / ms.len() as f64,
            mean_npi: mean_opt(ms.iter().filter_map(|m| m.npi).collect()),
            mean_npi_alt: mean_opt(ms.iter().filter_map(|m| m.npi_alt).collect()),
        })
        .collect();
    (metrics, MetricTable { rows })
}

/// Competition ranking on ascending score: exact ties share the rank
/// and the next distinct score skips past them.
pub fn rank_heuristics(scores: &[(String, f64)]) -> Vec<(String, usize)> {
    let mut sorted: Vec<&(String, f64)> = scores.iter().collect();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let mut out: Vec<(String, usize)> = Vec::with_capacity(sorted.len());
    for (i, entry) in sorted.iter().enumerate() {
        let rank = if i > 0 && entry.1 == sorted[i - 1].1 {
            out[i - 1].1
        } else {
            i + 1
        };
        out.push((entry.0.clone(), rank));
    }
    out
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.6}"))
}

pub fn metric_table_csv(table: &MetricTable) -> String {
    let mut out = String::from(
        "layers,density,inc,d,heuristic,runs,mean_gap,undefined_gaps,bks_runs,mean_seconds,mean_npi,mean_npi_alt\n",
    );
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{:.6},{},{}",
            r.group.layers,
            r.group.density,
            r.group.incremental,
            r.group.dislocation,
            r.heuristic,
            r.runs,
            fmt_opt(r.mean_gap),
            r.undefined_gaps,
            r.bks_runs,
            r.mean_seconds,
            fmt_opt(r.mean_npi),
            fmt_opt(r.mean_npi_alt),
        );
    }
    out
}

pub fn run_metrics_csv(metrics: &[RunMetrics]) -> String {
    let mut out =
        String::from("instance,heuristic,crossings,seconds,gap,bks_gap,npi,npi_alt\n");
    for m in metrics {
        let _ = writeln!(
            out,
            "{},{},{},{:.6},{},{},{},{}",
            m.instance,
            m.heuristic,
            m.crossings,
            m.seconds,
            fmt_opt(m.gap),
            m.bks_gap,
            fmt_opt(m.npi),
            fmt_opt(m.npi_alt),
        );
    }
    out
}

pub fn profile_csv(curves: &[ProfileCurve]) -> String {
    let mut out = String::from("heuristic,tau,fraction\n");
    for c in curves {
        for &(tau, frac) in &c.points {
            let _ = writeln!(out, "{},{:.6},{:.6}", c.heuristic, tau, frac);
        }
    }
    out
}

const PALETTE: [&str; 6] = ["#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#e67e22", "#16a085"];

/// Simple step-line chart of the profile curves.
pub fn profile_svg(curves: &[ProfileCurve], title: &str) -> String {
    let (w, h) = (640.0, 420.0);
    let (ml, mr, mt, mb) = (60.0, 20.0, 40.0, 50.0);
    let tau_min = curves
        .iter()
        .flat_map(|c| c.points.first().map(|p| p.0))
        .fold(1.0f64, f64::min);
    let tau_max = curves
        .iter()
        .flat_map(|c| c.points.last().map(|p| p.0))
        .fold(tau_min + 1e-9, f64::max);
    let x = |tau: f64| ml + (tau - tau_min) / (tau_max - tau_min) * (w - ml - mr);
    let y = |frac: f64| h - mb - frac * (h - mt - mb);

    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        w / 2.0,
        title
    );
    // Axes.
    let _ = writeln!(
        s,
        "<line x1=\"{ml}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        h - mb,
        w - mr,
        h - mb
    );
    let _ = writeln!(
        s,
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>",
        h - mb
    );
    for k in 0..=5 {
        let frac = k as f64 / 5.0;
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{:.1}</text>",
            ml - 6.0,
            y(frac) + 4.0,
            frac
        );
        let tau = tau_min + (tau_max - tau_min) * frac;
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{:.2}</text>",
            x(tau),
            h - mb + 18.0,
            tau
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">factor of best</text>",
        (ml + w - mr) / 2.0,
        h - 12.0
    );

    for (ci, c) in curves.iter().enumerate() {
        let color = PALETTE[ci % PALETTE.len()];
        let mut d = String::new();
        let mut prev_y: Option<f64> = None;
        for &(tau, frac) in &c.points {
            let (px, py) = (x(tau), y(frac));
            match prev_y {
                None => {
                    let _ = write!(d, "M{px:.1},{py:.1}");
                }
                Some(last) => {
                    // Step: horizontal to the new tau, then vertical.
                    let _ = write!(d, " L{px:.1},{last:.1} L{px:.1},{py:.1}");
                }
            }
            prev_y = Some(py);
        }
        let _ = writeln!(
            s,
            "<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>"
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">{}</text>",
            w - mr - 150.0,
            mt + 16.0 * ci as f64 + 8.0,
            c.heuristic
        );
    }
    s.push_str("</svg>\n");
    s
}
