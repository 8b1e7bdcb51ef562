//! Log-log order fits for residual decay rates, and envelope-constant
//! fits for Gronwall-type growth bounds.

use super::solve::bisect;

/// Outcome of a residual decay-order fit along a ray of sample distances.
#[derive(Debug, Clone)]
pub enum OrderFit {
    /// Ordinary least-squares fit of ln(residual) against ln(distance).
    Fit { slope: f64, intercept: f64, r2: f64, n_used: usize },
    /// Every informative residual sits at or below the numerical noise
    /// floor. A decay bound holds trivially on the sampled range (with a
    /// tiny constant), so order fitting would only fit round-off noise.
    AtFloor { max_abs: f64 },
}

impl OrderFit {
    /// Whether the fit certifies at least the requested decay order.
    pub fn passes(&self, min_slope: f64) -> bool {
        match self {
            OrderFit::Fit { slope, .. } => *slope >= min_slope,
            OrderFit::AtFloor { .. } => true,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            OrderFit::Fit { slope, r2, n_used, .. } => {
                format!("slope {slope:.3} (r2 {r2:.4}, {n_used} pts)")
            }
            OrderFit::AtFloor { max_abs } => {
                format!("residual at round-off floor (max {max_abs:.2e})")
            }
        }
    }

    pub fn slope_or(&self, at_floor: f64) -> f64 {
        match self {
            OrderFit::Fit { slope, .. } => *slope,
            OrderFit::AtFloor { .. } => at_floor,
        }
    }
}

/// Fit ln(e) = intercept + slope * ln(d) over samples (d, e), discarding
/// residuals below `floor` (they can only strengthen a decay claim; their
/// logs are dominated by round-off).
pub fn order_fit(samples: &[(f64, f64)], floor: f64) -> OrderFit {
    let max_abs = samples.iter().fold(0.0f64, |m, &(_, e)| m.max(e.abs()));
    let used: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(d, e)| d > 0.0 && e.abs() > floor)
        .map(|&(d, e)| (d.ln(), e.abs().ln()))
        .collect();
    if used.len() < 4 {
        return OrderFit::AtFloor { max_abs };
    }
    let n = used.len() as f64;
    let sx: f64 = used.iter().map(|p| p.0).sum();
    let sy: f64 = used.iter().map(|p| p.1).sum();
    let sxx: f64 = used.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = used.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return OrderFit::AtFloor { max_abs };
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let ybar = sy / n;
    let ss_tot: f64 = used.iter().map(|p| (p.1 - ybar).powi(2)).sum();
    let ss_res: f64 = used
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    OrderFit::Fit { slope, intercept, r2, n_used: used.len() }
}

/// Smallest C >= 0 such that ratio <= C * exp(C * t); monotone in C, so a
/// plain bisection suffices. Ratios <= 0 contribute nothing.
pub fn fit_growth_constant(samples: &[(f64, f64)]) -> f64 {
    let mut c_max: f64 = 0.0;
    for &(t, ratio) in samples {
        if ratio <= 0.0 {
            continue;
        }
        let g = |c: f64| c * (c * t).exp() - ratio;
        // g is increasing in c, negative at 0+.
        let mut hi = 1.0;
        while g(hi) < 0.0 && hi < 1e6 {
            hi *= 2.0;
        }
        let c = bisect(g, 1e-300, hi, 1e-12);
        c_max = c_max.max(c);
    }
    c_max
}
