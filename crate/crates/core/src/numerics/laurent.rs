use crate::bigreal::BigReal;
use crate::error::{LabError, Result};
use crate::numerics::PrecisionContext;

/// Coefficients of `f(x) = c_{-p} x^{-p} + ... + c_{k-p-1} x^{k-p-1}`.
#[derive(Debug, Clone)]
pub struct LaurentFit {
    /// `coefficients[j]` multiplies `x^(j - pole_order)`.
    pub coefficients: Vec<BigReal>,
    /// Ratio of the largest to the smallest pivot of the column-equilibrated
    /// system; a cheap stand-in for its condition number.
    pub condition_estimate: BigReal,
}

/// Fits a truncated Laurent expansion with a pole of order `pole_order` at 0.
///
/// With as many samples as coefficients this is an exact square solve;
/// extra samples are handled in the least-squares sense. Both go through a
/// Householder QR factorization at working precision. Fails with
/// [`LabError::Precision`] when the condition estimate exceeds
/// `10^(working_digits - target_digits)`, i.e. when conditioning would eat
/// into the target digits.
pub fn fit_laurent(
    samples: &[(BigReal, BigReal)],
    pole_order: u32,
    num_coeffs: usize,
    ctx: &PrecisionContext,
) -> Result<LaurentFit> {
    if num_coeffs == 0 {
        return Err(LabError::Input("need at least one coefficient".into()));
    }
    if samples.len() < num_coeffs {
        return Err(LabError::Input(format!(
            "{} samples cannot determine {} coefficients",
            samples.len(),
            num_coeffs
        )));
    }
    for (i, (x, _)) in samples.iter().enumerate() {
        if x.is_zero() {
            return Err(LabError::Input(format!("sample {i} sits at the pole x = 0")));
        }
        if samples[..i].iter().any(|(y, _)| y == x) {
            return Err(LabError::Input(format!("sample {i} repeats an earlier node")));
        }
    }

    let p = ctx.bits();
    let cols = num_coeffs;

    // Design matrix A[i][j] = x_i^(j - pole_order), then column equilibration.
    let mut a: Vec<Vec<BigReal>> = samples
        .iter()
        .map(|(x, _)| {
            let x = x.with_prec(p);
            let mut entry = x.powi(pole_order as usize).recip();
            let mut row = Vec::with_capacity(cols);
            for _ in 0..cols {
                row.push(entry.clone());
                entry = &entry * &x;
            }
            row
        })
        .collect();
    let mut b: Vec<BigReal> = samples.iter().map(|(_, v)| v.with_prec(p)).collect();

    let mut scale = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut s = BigReal::zero(p);
        for row in &a {
            let v = row[j].abs();
            if v > s {
                s = v;
            }
        }
        for row in a.iter_mut() {
            row[j] = &row[j] / &s;
        }
        scale.push(s);
    }

    // Householder QR, applied in place to A and b.
    let two = BigReal::from_i64(2, p);
    for j in 0..cols {
        let mut norm2 = BigReal::zero(p);
        for row in &a[j..] {
            norm2 = norm2 + &row[j] * &row[j];
        }
        if norm2.is_zero() {
            return Err(LabError::Precision(format!("singular Laurent system at column {j}")));
        }
        let norm = norm2.sqrt();
        let alpha = if a[j][j].is_negative() { norm } else { -norm };
        let mut v: Vec<BigReal> = a[j..].iter().map(|row| row[j].clone()).collect();
        v[0] = &v[0] - &alpha;
        let mut vnorm2 = BigReal::zero(p);
        for vi in &v {
            vnorm2 = vnorm2 + vi * vi;
        }
        if !vnorm2.is_zero() {
            for col in j..cols {
                let mut dot = BigReal::zero(p);
                for (vi, row) in v.iter().zip(&a[j..]) {
                    dot = dot + vi * &row[col];
                }
                let f = &two * dot / &vnorm2;
                for (vi, row) in v.iter().zip(a[j..].iter_mut()) {
                    row[col] = &row[col] - &f * vi;
                }
            }
            let mut dot = BigReal::zero(p);
            for (vi, bi) in v.iter().zip(&b[j..]) {
                dot = dot + vi * bi;
            }
            let f = &two * dot / &vnorm2;
            for (vi, bi) in v.iter().zip(b[j..].iter_mut()) {
                *bi = &*bi - &f * vi;
            }
        }
        a[j][j] = alpha;
    }

    let mut largest = BigReal::zero(p);
    let mut smallest: Option<BigReal> = None;
    for (j, row) in a.iter().enumerate().take(cols) {
        let d = row[j].abs();
        if d > largest {
            largest = d.clone();
        }
        if smallest.as_ref().is_none_or(|s| d < *s) {
            smallest = Some(d);
        }
    }
    let smallest = smallest.expect("at least one column");
    if smallest.is_zero() {
        return Err(LabError::Precision("singular Laurent system".into()));
    }
    let condition_estimate = &largest / &smallest;
    let limit = ctx.pow10((ctx.working_digits() - ctx.target_digits()) as i64);
    if condition_estimate > limit {
        return Err(LabError::Precision(format!(
            "Laurent system condition estimate {:.3} exceeds the guard budget 1e{}",
            condition_estimate,
            ctx.working_digits() - ctx.target_digits()
        )));
    }

    // Back substitution on R, then undo the column scaling.
    let mut c = vec![BigReal::zero(p); cols];
    for j in (0..cols).rev() {
        let mut acc = b[j].clone();
        for l in j + 1..cols {
            acc = acc - &a[j][l] * &c[l];
        }
        c[j] = acc / &a[j][j];
    }
    let coefficients = c.iter().zip(&scale).map(|(cj, s)| cj / s).collect();
    Ok(LaurentFit { coefficients, condition_estimate })
}
