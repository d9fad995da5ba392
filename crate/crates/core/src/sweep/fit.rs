use serde::Serialize;

use super::table::{Table, Value};
use crate::error::{invalid, Result};

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub points: usize,
}

pub const MIN_FIT_POINTS: usize = 4;

pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<ScalingFit> {
    if xs.len() != ys.len() {
        return Err(invalid("x and y have different lengths"));
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(invalid(format!(
            "a scaling fit needs at least {MIN_FIT_POINTS} points, got {}",
            xs.len()
        )));
    }
    if let Some(v) = xs.iter().chain(ys).find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(invalid(format!("log-log fit needs positive finite values, got {v}")));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("all x values coincide"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(ScalingFit {
        slope,
        intercept,
        stderr,
        points: lx.len(),
    })
}

/// Fit `y_col` against `x_col`; rows with an empty cell in either column are
/// skipped.
pub fn fit_scaling(table: &Table, x_col: &str, y_col: &str) -> Result<ScalingFit> {
    let (ix, iy) = (table.column_index(x_col)?, table.column_index(y_col)?);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for row in table.rows() {
        if matches!(row[ix], Value::Empty) || matches!(row[iy], Value::Empty) {
            continue;
        }
        let x = row[ix]
            .as_f64()
            .ok_or_else(|| invalid(format!("column `{x_col}` holds a non-numeric value")))?;
        let y = row[iy]
            .as_f64()
            .ok_or_else(|| invalid(format!("column `{y_col}` holds a non-numeric value")))?;
        xs.push(x);
        ys.push(y);
    }
    fit_loglog(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let f = fit_loglog(&xs, &xs.map(|x| 3.0 / x)).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(f.stderr < 1e-12);
        let f = fit_loglog(&xs, &xs.map(|x| 0.5 / (x * x))).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_loglog(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(fit_loglog(&[1.0, 2.0, 3.0, 0.0], &[1.0, 2.0, 3.0, 4.0]).is_err());
        assert!(fit_loglog(&[1.0, 2.0, 3.0, 4.0], &[1.0, -2.0, 3.0, 4.0]).is_err());
    }

    #[test]
    fn table_fit_skips_empty_cells() {
        let mut t = Table::new(["n", "y"]);
        for n in [1.0, 2.0, 4.0, 8.0] {
            t.push(vec![n.into(), (2.0 / n).into()]);
        }
        t.push(vec![16.0.into(), Value::Empty]);
        let f = fit_scaling(&t, "n", "y").unwrap();
        assert_eq!(f.points, 4);
        assert!(fit_scaling(&t, "n", "missing").is_err());
    }
}
