use crate::error::{Error, Result};

/// Accumulated coincidence imbalance `½ ∫ (1 + Q) dB`.
///
/// `values[0]` is the zero starting point; `values[k]` is the sum of the first
/// `k` integrand-weighted increments. `times` is the step index.
#[derive(Debug, Clone, PartialEq)]
pub struct ImbalancePath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl ImbalancePath {
    /// `|N₁ − N₀|` at the end of the path.
    pub fn final_imbalance(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0).abs()
    }
}

/// Left-point (Itô) sum of `½ (1 + q[k]) · increments[k]`.
pub fn ito_imbalance(q: &[f64], increments: &[f64]) -> Result<ImbalancePath> {
    if q.len() != increments.len() {
        return Err(Error::usage(format!(
            "integrand has {} samples but {} increments were given",
            q.len(),
            increments.len()
        )));
    }
    let mut values = Vec::with_capacity(q.len() + 1);
    let mut acc = 0.0;
    values.push(acc);
    for (&qk, &db) in q.iter().zip(increments) {
        acc += 0.5 * (1.0 + qk) * db;
        values.push(acc);
    }
    let times = (0..values.len()).map(|k| k as f64).collect();
    Ok(ImbalancePath { times, values })
}
