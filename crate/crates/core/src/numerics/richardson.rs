use crate::bigreal::BigReal;
use crate::error::{LabError, Result};

/// Richardson tableau for samples on a geometric step schedule.
///
/// Row `k` holds `k + 1` entries; `tableau[k][j]` has the error terms of
/// orders `p .. p + j - 1` removed, where `p` is the assumed leading order.
#[derive(Debug, Clone)]
pub struct ExtrapolationTable {
    pub nodes: Vec<BigReal>,
    pub samples: Vec<BigReal>,
    pub tableau: Vec<Vec<BigReal>>,
    pub estimate: BigReal,
    /// `|T[m-1][m-1] - T[m-2][m-2]|`
    pub error_estimate: BigReal,
}

impl ExtrapolationTable {
    /// Diagonal entries `T[k][k]`, i.e. the best estimate after each node.
    pub fn diagonal(&self) -> Vec<BigReal> {
        self.tableau.iter().enumerate().map(|(k, row)| row[k].clone()).collect()
    }
}

/// `count` nodes `x0, x0/2, x0/4, ...` (exact binary scaling).
pub fn geometric_schedule(x0: &BigReal, count: usize) -> Vec<BigReal> {
    (0..count).map(|k| x0.ldexp(-(k as i32))).collect()
}

pub(crate) fn check_geometric(nodes: &[BigReal], ratio: &BigReal) -> Result<()> {
    for (k, w) in nodes.windows(2).enumerate() {
        if w[0].is_zero() || w[1].is_zero() {
            return Err(LabError::Input(format!("zero node in schedule at index {k}")));
        }
        let prec = w[0].prec().max(w[1].prec());
        let tol = w[0].abs() * BigReal::pow2(16 - prec as i32, prec);
        if (&w[0] - ratio * &w[1]).abs() > tol {
            return Err(LabError::Input(format!(
                "nodes are not geometric with ratio {:.6}: x[{}]={:.12}, x[{}]={:.12}",
                ratio,
                k,
                w[0],
                k + 1,
                w[1]
            )));
        }
    }
    Ok(())
}

/// Builds the full Richardson tableau for `(node, value)` samples taken at
/// `x_{k+1} = x_k / ratio`, assuming an error expansion in powers
/// `assumed_order, assumed_order + 1, ...` of the node.
pub fn richardson_extrapolate(
    samples: &[(BigReal, BigReal)],
    ratio: &BigReal,
    assumed_order: u32,
) -> Result<ExtrapolationTable> {
    if samples.len() < 2 {
        return Err(LabError::Input(format!(
            "Richardson extrapolation needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    if assumed_order == 0 {
        return Err(LabError::Input("assumed order must be positive".into()));
    }
    if *ratio <= BigReal::one(ratio.prec()) {
        return Err(LabError::Input("ratio must exceed 1".into()));
    }
    let nodes: Vec<BigReal> = samples.iter().map(|(x, _)| x.clone()).collect();
    let values: Vec<BigReal> = samples.iter().map(|(_, v)| v.clone()).collect();
    check_geometric(&nodes, ratio)?;

    let m = values.len();
    // ratio^(order + j) - 1 for each column j >= 1
    let one = BigReal::one(ratio.prec());
    let mut denominators = Vec::with_capacity(m);
    let mut power = ratio.powi(assumed_order as usize);
    for _ in 1..m {
        denominators.push(&power - &one);
        power = &power * ratio;
    }

    let mut tableau: Vec<Vec<BigReal>> = Vec::with_capacity(m);
    for k in 0..m {
        let mut row = Vec::with_capacity(k + 1);
        row.push(values[k].clone());
        for j in 1..=k {
            let fine = &row[j - 1];
            let coarse = &tableau[k - 1][j - 1];
            let next = fine + (fine - coarse) / &denominators[j - 1];
            row.push(next);
        }
        tableau.push(row);
    }
    let estimate = tableau[m - 1][m - 1].clone();
    let error_estimate = (&estimate - &tableau[m - 2][m - 2]).abs();
    Ok(ExtrapolationTable { nodes, samples: values, tableau, estimate, error_estimate })
}
