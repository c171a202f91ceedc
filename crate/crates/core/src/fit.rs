//! Least-squares fits on logarithmic scales.

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub samples: usize,
}

/// Fits `ln value = intercept + slope · ln scale` by least squares.
pub fn fit_loglog(pairs: &[(f64, f64)]) -> Result<FitResult> {
    if pairs.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a log-log fit needs at least 3 pairs, got {}",
            pairs.len()
        )));
    }
    if let Some(&(s, v)) = pairs.iter().find(|(s, v)| !(*s > 0.0 && *v > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "log-log fit needs positive pairs, got ({s}, {v})"
        )));
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("log-log fit needs at least two distinct scales".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        samples: pairs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_and_constant() {
        let sq: Vec<(f64, f64)> = [0.5, 0.25, 0.125, 0.0625].iter().map(|&h| (h, h * h)).collect();
        let f = fit_loglog(&sq).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        let c = fit_loglog(&[(1.0, 3.0), (2.0, 3.0), (4.0, 3.0)]).unwrap();
        assert!(c.slope.abs() < 1e-15);
        assert!(fit_loglog(&[(1.0, 1.0), (2.0, 1.0)]).is_err());
        assert!(fit_loglog(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
    }
}
