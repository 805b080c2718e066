//! Ordinary least squares for straight-line fits on log-log data.

#[derive(Debug, Clone, Copy)]
pub(crate) struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    /// Root-mean-square residual.
    pub rms_residual: f64,
}

/// Unweighted least-squares line through `(x, y)`. Requires at least 3 points
/// with non-constant `x`.
pub(crate) fn linear_fit(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 3 || y.len() != n {
        return None;
    }
    let nf = n as f64;
    let mean_x = x.iter().sum::<f64>() / nf;
    let mean_y = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mean_x;
        sxx += dx * dx;
        sxy += dx * (yi - mean_y);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let r = yi - (intercept + slope * xi);
            r * r
        })
        .sum();
    let slope_stderr = (ss_res / (nf - 2.0) / sxx).sqrt();
    Some(LineFit {
        slope,
        intercept,
        slope_stderr,
        rms_residual: (ss_res / nf).sqrt(),
    })
}
