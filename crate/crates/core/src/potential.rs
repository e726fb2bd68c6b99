//! Frame potentials of the full set of stabilizer states and the resulting
//! design verdicts.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    gaussian_binomial, stabilizer_count, welch_bound, ExactRational, Prime,
};
use crate::error::{Error, Result};
use crate::stabilizer::{check_state_count, enumerate_states, state_vector, StateVector};
use crate::summation::pairwise_sum;
use crate::Caps;

/// Default cap on state pairs visited by the double-sum engine.
pub const DEFAULT_PAIR_CAP: u64 = 25_000_000;

fn check_t(t: u32) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

fn dpow(d: Prime, e: i64) -> ExactRational {
    ExactRational::power(d.get(), e)
}

/// `F_t` by the base case `(d^{2-t}+1)/((d+1)d)` and the step factors
/// `(d^{k-(t-2)}+1)/(d(d^{k+1}+1))`, `k = 1..n-1`.
pub fn frame_potential_recursion(d: Prime, n: usize, t: u32) -> Result<ExactRational> {
    check_n(n)?;
    check_t(t)?;
    let dd = d.get() as i64;
    let t = t as i64;
    let mut f =
        (dpow(d, 2 - t) + ExactRational::one()) / ExactRational::from_integer((dd + 1) * dd);
    for k in 1..n as i64 {
        let num = dpow(d, k - (t - 2)) + ExactRational::one();
        let den = ExactRational::from_integer(dd) * (dpow(d, k + 1) + ExactRational::one());
        f = f * (num / den);
    }
    Ok(f)
}

/// `F_t = S^{-1} Σ_{k=0}^{n} [n,k]_d · d^{(n-k)(n-k+3-2t)/2}`.
pub fn frame_potential_combinatorial(d: Prime, n: usize, t: u32) -> Result<ExactRational> {
    check_n(n)?;
    check_t(t)?;
    let sum: ExactRational = (0..=n as u32)
        .map(|k| {
            let j = (n as u32 - k) as i64;
            let e = j * (j + 3) / 2 - t as i64 * j;
            ExactRational::from_integer(gaussian_binomial(n as u32, k, d)) * dpow(d, e)
        })
        .sum();
    Ok(sum / ExactRational::from_integer(stabilizer_count(d, n as u32)))
}

fn moment(a: &StateVector, b: &StateVector, t: u32) -> f64 {
    a.inner(b).norm_sqr().powi(t as i32)
}

fn realize_all(d: Prime, n: usize, caps: &Caps) -> Result<Vec<StateVector>> {
    let states: Vec<_> = enumerate_states(d, n, caps)?.collect();
    states
        .par_iter()
        .map(|s| state_vector(s, caps.matrix))
        .collect()
}

/// `S^{-2} Σ_{i,j} |⟨x_i, x_j⟩|^{2t}` over realized state vectors.
pub fn frame_potential_bruteforce(d: Prime, n: usize, t: u32, caps: &Caps) -> Result<f64> {
    check_n(n)?;
    check_t(t)?;
    let s = stabilizer_count(d, n as u32);
    let pairs: BigInt = &s * &s;
    if pairs.to_u64().is_none_or(|p| p > caps.pairs) {
        return Err(Error::cap("stabilizer state pairs", pairs, caps.pairs));
    }
    let vs = realize_all(d, n, caps)?;
    let rows: Vec<f64> = vs
        .par_iter()
        .map(|a| {
            let terms: Vec<f64> = vs.iter().map(|b| moment(a, b, t)).collect();
            pairwise_sum(&terms)
        })
        .collect();
    let m = vs.len() as f64;
    Ok(pairwise_sum(&rows) / (m * m))
}

/// `S^{-1} Σ_i |⟨x_0, x_i⟩|^{2t}` with `x_0 = |M_0, 0⟩`, `M_0` the first
/// enumerated Lagrangian. The Clifford group acts transitively on the
/// states, so every row of the double sum is the same.
pub fn frame_potential_fixed_state(d: Prime, n: usize, t: u32, caps: &Caps) -> Result<f64> {
    check_n(n)?;
    check_t(t)?;
    check_state_count(d, n, caps.states)?;
    let vs = realize_all(d, n, caps)?;
    let reference = &vs[0];
    let terms: Vec<f64> = vs.iter().map(|b| moment(reference, b, t)).collect();
    Ok(pairwise_sum(&terms) / vs.len() as f64)
}

/// What the classification predicts: every ensemble is a 2-design, qubits
/// reach 3, nothing reaches 4.
pub fn expected_design(d: Prime, t: u32) -> bool {
    match t {
        0..=2 => true,
        3 => d.get() == 2,
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramePotentialReport {
    pub d: Prime,
    pub n: usize,
    pub t: u32,
    #[serde(rename = "D")]
    pub dimension: u64,
    #[serde(rename = "recursion")]
    pub value_recursion: ExactRational,
    #[serde(rename = "combinatorial")]
    pub value_combinatorial: ExactRational,
    #[serde(rename = "bruteforce")]
    pub value_bruteforce: Option<f64>,
    pub welch: ExactRational,
    #[serde(rename = "is_design")]
    pub is_t_design: bool,
}

/// `d^n` as a machine integer.
pub fn hilbert_dimension(d: Prime, n: usize) -> Result<u64> {
    (d.get() as u64).checked_pow(n as u32).ok_or_else(|| {
        Error::cap(
            "Hilbert-space dimension",
            BigInt::from(d.get()).pow(n as u32),
            u64::MAX,
        )
    })
}

impl FramePotentialReport {
    /// The exact part of the report; `value_bruteforce` is left empty.
    pub fn exact(d: Prime, n: usize, t: u32) -> Result<Self> {
        let dimension = hilbert_dimension(d, n)?;
        let value_recursion = frame_potential_recursion(d, n, t)?;
        let value_combinatorial = frame_potential_combinatorial(d, n, t)?;
        let welch = welch_bound(dimension, t);
        let is_t_design = value_combinatorial == welch;
        Ok(FramePotentialReport {
            d,
            n,
            t,
            dimension,
            value_recursion,
            value_combinatorial,
            value_bruteforce: None,
            welch,
            is_t_design,
        })
    }
}

/// One exact report per `t = 1..=t_max`.
pub fn design_verdict(d: Prime, n: usize, t_max: u32) -> Result<Vec<FramePotentialReport>> {
    (1..=t_max)
        .map(|t| FramePotentialReport::exact(d, n, t))
        .collect()
}
