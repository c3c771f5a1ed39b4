//! Least-squares line fits for scaling laws and decay rates.

/// Fitted line y = slope * x + intercept with its coefficient of
/// determination.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub n: usize,
}

/// Ordinary least squares. Scaling fits are only meaningful with a few
/// points, so fewer than 4 is rejected.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<Fit, String> {
    if xs.len() != ys.len() {
        return Err("fit inputs have mismatched lengths".into());
    }
    let n = xs.len();
    if n < 4 {
        return Err(format!("fit needs at least 4 points, got {n}"));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys.iter()).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err("fit abscissae are all equal".into());
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let r2 = if ss_tot == 0.0 {
        if ss_res == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(Fit { slope, intercept, r2, n })
}

/// Fit on (log x, log y); entries with nonpositive x or y are skipped.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<Fit, String> {
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        if x > 0.0 && y > 0.0 {
            lx.push(x.ln());
            ly.push(y.ln());
        }
    }
    linear_fit(&lx, &ly)
}
