//! Order-fixed floating-point reduction.

const LEAF: usize = 8;

/// Sums `xs` by recursive halving, with short runs added left to right.
///
/// The tree depends only on `xs.len()`, so the result is reproducible no
/// matter how the terms were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        return xs.iter().fold(0.0, |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
