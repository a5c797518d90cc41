use crate::bigreal::BigReal;
use crate::error::{LabError, Result};
use crate::numerics::richardson::check_geometric;

/// Observed convergence order from `(node, error)` pairs on a geometric
/// schedule: the mean of `log_r(|e_k| / |e_{k+1}|)` over consecutive pairs,
/// with `r = node_0 / node_1`.
///
/// A zero error anywhere means the limit is already attained at working
/// precision; that case is reported as [`LabError::LimitAttained`].
pub fn empirical_order(samples: &[(BigReal, BigReal)]) -> Result<BigReal> {
    if samples.len() < 2 {
        return Err(LabError::Input(format!(
            "order estimate needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    if let Some(index) = samples.iter().position(|(_, e)| e.is_zero()) {
        return Err(LabError::LimitAttained { index });
    }
    if samples[1].0.is_zero() {
        return Err(LabError::Input("zero node".into()));
    }
    let ratio = &samples[0].0 / &samples[1].0;
    if ratio.abs() <= BigReal::one(ratio.prec()) {
        return Err(LabError::Input("nodes must shrink in magnitude".into()));
    }
    let nodes: Vec<BigReal> = samples.iter().map(|(x, _)| x.clone()).collect();
    check_geometric(&nodes, &ratio)?;
    let ln_r = ratio.ln();
    let mut sum = BigReal::zero(ratio.prec());
    for w in samples.windows(2) {
        sum = sum + (w[0].1.abs() / w[1].1.abs()).ln();
    }
    let pairs = BigReal::from_u64((samples.len() - 1) as u64, ratio.prec());
    Ok(sum / ln_r / pairs)
}
