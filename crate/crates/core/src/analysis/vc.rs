use std::collections::HashSet;

use num_traits::Float;

use crate::machine::FunctionTable;
use crate::{Error, Result};

/// Largest class handled by [`vc_dimension`].
pub const VC_CLASS_CAP: usize = 1 << 16;

/// Size of the largest subset of `X_t` shattered by `class`, by brute force.
pub fn vc_dimension(class: &[FunctionTable]) -> Result<usize> {
    let Some(first) = class.first() else {
        return Ok(0);
    };
    let t = first.t();
    if t > 4 {
        return Err(Error::OutOfRange(format!("brute-force VC dimension needs t <= 4, got {t}")));
    }
    if class.len() > VC_CLASS_CAP {
        return Err(Error::CapExceeded { cap: VC_CLASS_CAP as u64 });
    }
    if class.iter().any(|f| f.t() != t) {
        return Err(Error::Domain("class mixes input lengths".into()));
    }
    let masks: Vec<u64> = class.iter().map(|f| f.to_mask().expect("t <= 4")).collect();
    let points = 1u32 << t;
    let mut best = 0;
    // A shattered set of size d needs 2^d distinct functions.
    let max_d = (usize::BITS - 1 - class.len().leading_zeros()).min(points) as usize;
    for subset in 1u32..1 << points {
        let d = subset.count_ones() as usize;
        if d <= best || d > max_d {
            continue;
        }
        let patterns: HashSet<u64> = masks.iter().map(|m| m & subset as u64).collect();
        if patterns.len() == 1 << d {
            best = d;
        }
    }
    Ok(best)
}

/// `⌈max(l·(8/ε)·log₂(13/ε), (4/ε)·log₂(2/δ))⌉`.
pub fn prop1_bound<F: Float>(l: u64, epsilon: F, delta: F) -> Result<u64> {
    let (zero, one) = (F::zero(), F::one());
    if !(epsilon > zero && epsilon < one && delta > zero && delta < one) {
        return Err(Error::Domain("ε and δ must lie in (0, 1)".into()));
    }
    let c = |v: f64| F::from(v).expect("representable constant");
    let first = F::from(l).expect("representable length") * (c(8.0) / epsilon) * (c(13.0) / epsilon).log2();
    let second = (c(4.0) / epsilon) * (c(2.0) / delta).log2();
    first.max(second).ceil().to_u64().ok_or_else(|| Error::OutOfRange("bound does not fit in u64".into()))
}
