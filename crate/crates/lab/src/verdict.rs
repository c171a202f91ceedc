use std::fmt;

use meyers_core::fit::fit_loglog;

/// One pass/fail check with the measured quantities behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Verdict {
        Verdict {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// `max / min` of positive values; infinite when any value is not positive.
pub fn spread(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if values.is_empty() || !(lo > 0.0) {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Log-log slope, `None` when fewer than 3 usable pairs.
pub fn slope(pairs: &[(f64, f64)]) -> Option<f64> {
    fit_loglog(pairs).ok().map(|f| f.slope)
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "n/a".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spread_and_slope() {
        assert_eq!(spread(&[2.0, 1.0, 4.0]), 4.0);
        assert_eq!(spread(&[1.0, 0.0]), f64::INFINITY);
        assert_eq!(spread(&[]), f64::INFINITY);
        let s = slope(&[(0.5, 0.25), (0.25, 0.0625), (0.125, 0.015625)]).unwrap();
        assert!((s - 2.0).abs() < 1e-12);
        assert!(slope(&[(0.5, 1.0), (0.25, 1.0)]).is_none());
    }
}
