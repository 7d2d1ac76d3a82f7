use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// Largest outcome alphabet the estimator accepts on either side.
pub const MAX_ALPHABET: usize = 64;

/// Plug-in mutual information in bits with the Miller–Madow correction
/// `(m − 1)/(2N)` nats applied to each of H(X), H(Y) and H(X,Y), where `m`
/// counts occupied bins. The result is clamped at 0.
pub fn mutual_information<X: Ord, Y: Ord>(xs: &[X], ys: &[Y]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::invalid(format!("paired samples differ in length: {} vs {}", xs.len(), ys.len())));
    }
    if xs.is_empty() {
        return Err(Error::invalid("no samples"));
    }
    let mut px: BTreeMap<&X, u64> = BTreeMap::new();
    let mut py: BTreeMap<&Y, u64> = BTreeMap::new();
    let mut pxy: BTreeMap<(&X, &Y), u64> = BTreeMap::new();
    for (x, y) in xs.iter().zip(ys) {
        *px.entry(x).or_default() += 1;
        *py.entry(y).or_default() += 1;
        *pxy.entry((x, y)).or_default() += 1;
    }
    if px.len() > MAX_ALPHABET || py.len() > MAX_ALPHABET {
        return Err(Error::invalid(format!(
            "alphabet sizes {} and {} exceed the estimator limit of {MAX_ALPHABET}",
            px.len(),
            py.len()
        )));
    }
    let n = xs.len() as f64;
    let miller_madow = |counts: Vec<u64>| -> f64 {
        let plug_in: f64 = counts.iter().map(|&c| c as f64 / n).map(|p| -p * p.ln()).sum();
        plug_in + (counts.len() as f64 - 1.0) / (2.0 * n)
    };
    let hx = miller_madow(px.into_values().collect());
    let hy = miller_madow(py.into_values().collect());
    let hxy = miller_madow(pxy.into_values().collect());
    Ok(((hx + hy - hxy) / LN_2).max(0.0))
}

/// Plug-in Shannon entropy in bits, no correction.
pub fn entropy_bits<X: Ord>(xs: &[X]) -> f64 {
    let mut counts: BTreeMap<&X, u64> = BTreeMap::new();
    for x in xs {
        *counts.entry(x).or_default() += 1;
    }
    let n = xs.len() as f64;
    counts.values().map(|&c| c as f64 / n).map(|p| -p * p.log2()).sum()
}
