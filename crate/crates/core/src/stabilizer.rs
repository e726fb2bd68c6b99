//! Stabilizer states `|M, ζ⟩` labelled by a Lagrangian `M` and a coset
//! `[ζ]_M`.
//!
//! A state is identified by its canonical labels. Hilbert-space vectors are
//! derived on demand from the projector
//! `ρ = d^{-n} Σ_{m∈M} ω^{[ζ,m]} w_B(m)`, where `B` is the canonical RREF
//! basis of `M`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{stabilizer_count, ExactRational, Prime};
use crate::error::{Error, Result};
use crate::linalg;
use crate::symplectic::{
    canonical_representative, coset_representatives, enumerate_lagrangians, form_raw,
    LagrangianSubspace, PhaseVector, Subspace,
};
use crate::weyl::{hilbert_dim, weyl_basis_symbolic, DenseOperator, TauPhase, WeylOperator};
use crate::Caps;

/// Default cap on the number of states an enumeration may yield.
pub const DEFAULT_STATE_CAP: u64 = 1_000_000;

/// Tolerance for projector, eigenvalue and overlap checks.
pub const STATE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StabilizerState {
    lagrangian: LagrangianSubspace,
    zeta: PhaseVector,
}

impl StabilizerState {
    /// The state `|M, v⟩`; `v` is replaced by its canonical coset
    /// representative.
    pub fn new(lagrangian: LagrangianSubspace, v: &PhaseVector) -> Result<Self> {
        let zeta = canonical_representative(&lagrangian, v)?;
        Ok(StabilizerState { lagrangian, zeta })
    }

    pub fn lagrangian(&self) -> &LagrangianSubspace {
        &self.lagrangian
    }

    pub fn zeta(&self) -> &PhaseVector {
        &self.zeta
    }

    pub fn d(&self) -> Prime {
        self.lagrangian.d()
    }

    pub fn n(&self) -> usize {
        self.lagrangian.n()
    }

    /// The basis used for `w_B`: the canonical generators of `M`.
    pub fn basis(&self) -> Vec<PhaseVector> {
        self.lagrangian
            .basis()
            .expect("Lagrangians live in phase space")
    }

    /// The `d^n` operators `ω^{[ζ,m]} w_B(m)`, each fixing the state.
    pub fn stabilizer_group(&self) -> Vec<WeylOperator> {
        stabilizer_group(&self.basis(), &self.zeta)
    }

    pub fn to_record(&self, with_amplitudes: bool, cap: u64) -> Result<StateRecord> {
        let amplitudes = if with_amplitudes {
            Some(
                state_vector(self, cap)?
                    .amplitudes
                    .iter()
                    .map(|a| [a.re, a.im])
                    .collect(),
            )
        } else {
            None
        };
        Ok(StateRecord {
            d: self.d(),
            n: self.n(),
            lagrangian: self.lagrangian.clone(),
            zeta: self.zeta.coords().to_vec(),
            amplitudes,
        })
    }
}

/// JSON form: `{d, n, lagrangian, zeta, amplitudes?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub d: Prime,
    pub n: usize,
    pub lagrangian: LagrangianSubspace,
    pub zeta: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
}

impl TryFrom<StateRecord> for StabilizerState {
    type Error = Error;

    fn try_from(r: StateRecord) -> Result<Self> {
        if r.lagrangian.d() != r.d || r.lagrangian.n() != r.n {
            return Err(Error::DimensionMismatch(
                "record header and Lagrangian differ".into(),
            ));
        }
        let coords: Vec<i64> = r.zeta.iter().map(|&x| x as i64).collect();
        let zeta = PhaseVector::new(r.d, r.n, &coords)?;
        let s = StabilizerState::new(r.lagrangian, &zeta)?;
        if s.zeta != zeta {
            return Err(Error::InvalidArgument(
                "zeta is not the canonical coset representative".into(),
            ));
        }
        Ok(s)
    }
}

impl Serialize for StabilizerState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record(false, 0)
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StabilizerState {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = StateRecord::deserialize(de)?;
        StabilizerState::try_from(r).map_err(serde::de::Error::custom)
    }
}

/// Iterates coefficient vectors of `0..d` of length `k`, last fastest.
fn coefficient_vectors(k: usize, d: u32) -> impl Iterator<Item = Vec<u8>> {
    let mut cur = Some(vec![0u8; k]);
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut carried = true;
        for x in next.iter_mut().rev() {
            if (*x as u32) + 1 < d {
                *x += 1;
                carried = false;
                break;
            }
            *x = 0;
        }
        cur = if carried { None } else { Some(next) };
        Some(out)
    })
}

/// `w_B(m)` for every `m` in the span of `basis`, in coefficient order.
fn basis_group(basis: &[PhaseVector], d: Prime, n: usize) -> Vec<WeylOperator> {
    let gens: Vec<WeylOperator> = basis.iter().map(|u| WeylOperator::new(u.clone())).collect();
    coefficient_vectors(basis.len(), d.get())
        .map(|c| {
            let mut acc = WeylOperator::identity(d, n);
            for (g, &ci) in gens.iter().zip(&c) {
                acc = acc
                    .mul(&g.pow(ci as u32).expect("same space"))
                    .expect("same space");
            }
            acc
        })
        .collect()
}

/// `ω^{[v,m]} w_B(m)` for every `m` in the span of `basis`.
pub fn stabilizer_group(basis: &[PhaseVector], v: &PhaseVector) -> Vec<WeylOperator> {
    let d = v.d();
    basis_group(basis, d, v.n())
        .into_iter()
        .map(|w| {
            let k = form_raw(v.coords(), w.point.coords(), d.get());
            WeylOperator {
                phase: w.phase * TauPhase::omega(d, k as i64),
                point: w.point,
            }
        })
        .collect()
}

/// `d^{-n} Σ_{m∈M} ω^{[v,m]} w_B(m)` for an explicit basis `B` of an
/// isotropic space.
pub fn projector_with_basis(
    basis: &[PhaseVector],
    v: &PhaseVector,
    cap: u64,
) -> Result<DenseOperator> {
    let d = v.d();
    let n = v.n();
    let dim = hilbert_dim(d, n, cap)?;
    let norm = 1.0 / dim as f64;
    let mut rho = DenseOperator::zeros(dim);
    for g in stabilizer_group(basis, v) {
        rho.add_scaled(Complex64::new(norm, 0.0), &g.to_dense(cap)?);
    }
    Ok(rho)
}

/// The rank-one projector onto `|M, v⟩`, using `M`'s canonical basis.
pub fn projector(m: &LagrangianSubspace, v: &PhaseVector, cap: u64) -> Result<DenseOperator> {
    if v.d() != m.d() || v.n() != m.n() {
        return Err(Error::DimensionMismatch(
            "vector and Lagrangian differ".into(),
        ));
    }
    projector_with_basis(&m.basis()?, v, cap)
}

/// A unit vector with its global phase fixed: the first amplitude of
/// non-negligible modulus is real and positive.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `⟨self | other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

const NEGLIGIBLE: f64 = 1e-9;

fn fix_phase(mut amps: Vec<Complex64>) -> StateVector {
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let lead = amps
        .iter()
        .find(|a| a.norm() > NEGLIGIBLE)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let rot = lead.conj() / (lead.norm() * norm);
    for a in amps.iter_mut() {
        *a *= rot;
    }
    StateVector { amplitudes: amps }
}

/// Realizes `|M, ζ⟩` as the normalized maximal-norm column of its projector.
///
/// The projector is applied column-wise through its `d^n` monomials, so no
/// dense `D×D` matrix is formed. Column norms are read off the diagonal
/// (`‖ρ e_x‖² = ρ_xx`), ties resolved toward the lowest index.
pub fn state_vector(s: &StabilizerState, cap: u64) -> Result<StateVector> {
    let d = s.d();
    let dim = hilbert_dim(d, s.n(), cap)?;
    let group = s.stabilizer_group();
    let scale = 1.0 / dim as f64;

    let mut diag = vec![0.0f64; dim];
    for g in group.iter().filter(|g| g.point.q().iter().all(|&x| x == 0)) {
        for (x, slot) in diag.iter_mut().enumerate() {
            let (y, amp) = g.apply_to_basis(x);
            debug_assert_eq!(x, y);
            *slot += amp.re * scale;
        }
    }
    let best = diag.iter().copied().fold(f64::MIN, f64::max);
    let col = diag
        .iter()
        .position(|&v| v >= best - NEGLIGIBLE)
        .expect("nonempty diagonal");

    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for g in &group {
        let (y, amp) = g.apply_to_basis(col);
        amps[y] += amp * scale;
    }
    Ok(fix_phase(amps))
}

/// `max_m ‖ω^{[ζ,m]} w_B(m) ψ - ψ‖_∞` over the whole stabilizer group.
pub fn eigen_residual(s: &StabilizerState, psi: &StateVector) -> f64 {
    s.stabilizer_group()
        .iter()
        .map(|g| {
            g.apply(&psi.amplitudes)
                .iter()
                .zip(&psi.amplitudes)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// `|⟨a|b⟩|²` computed exactly from the labels.
///
/// With `K = M ∩ N`, the overlap is `|K| / d^n` when both states have the
/// same eigenvalue under every `w(k)`, `k ∈ K`, and `0` otherwise. The states
/// are realized with the canonical bases of `M` and `N`, which for `d = 2`
/// may assign different signs `w_{B_M}(k) = τ^{e_M(k)} w(k)` and
/// `w_{B_N}(k) = τ^{e_N(k)} w(k)` to the same `k`. The eigenvalue condition
/// is therefore `2[ζ,k] + e_M(k) ≡ 2[ι,k] + e_N(k)` modulo the order of `τ`;
/// when the two bases agree on `K` this reduces to `[ζ - ι, k] = 0`. Both
/// sides are characters of `K`, so checking the generators of `K` suffices.
pub fn overlap_exact(a: &StabilizerState, b: &StabilizerState) -> Result<ExactRational> {
    if a.d() != b.d() || a.n() != b.n() {
        return Err(Error::DimensionMismatch(
            "states on different spaces".into(),
        ));
    }
    let d = a.d();
    let k = a.lagrangian.intersect(&b.lagrangian)?;
    let ba = a.basis();
    let bb = b.basis();
    for g in k.basis()? {
        let ea = weyl_basis_symbolic(&ba, &g)?.phase;
        let eb = weyl_basis_symbolic(&bb, &g)?.phase;
        let za = form_raw(a.zeta.coords(), g.coords(), d.get()) as i64;
        let zb = form_raw(b.zeta.coords(), g.coords(), d.get()) as i64;
        let lhs = TauPhase::omega(d, za) * ea;
        let rhs = TauPhase::omega(d, zb) * eb;
        if lhs != rhs {
            return Ok(ExactRational::zero());
        }
    }
    Ok(ExactRational::power(d.get(), k.dim() as i64 - a.n() as i64))
}

/// All `S(d, n)` stabilizer states: Lagrangians in enumeration order, then
/// canonical coset representatives.
pub fn enumerate_states(
    d: Prime,
    n: usize,
    caps: &Caps,
) -> Result<impl Iterator<Item = StabilizerState>> {
    check_state_count(d, n, caps.states)?;
    Ok(
        enumerate_lagrangians(d, n, caps.enumeration)?.flat_map(|m| {
            coset_representatives(&m)
                .map(|zeta| StabilizerState {
                    lagrangian: m.clone(),
                    zeta,
                })
                .collect::<Vec<_>>()
        }),
    )
}

pub(crate) fn check_state_count(d: Prime, n: usize, cap: u64) -> Result<u64> {
    let count: BigInt = stabilizer_count(d, n as u32);
    match count.to_u64() {
        Some(c) if c <= cap => Ok(c),
        _ => Err(Error::cap("stabilizer states", count, cap)),
    }
}

/// Bases of `M` and `N` that both extend the canonical basis of `K = M ∩ N`.
pub fn compatible_bases(
    m: &LagrangianSubspace,
    nn: &LagrangianSubspace,
) -> Result<(Vec<PhaseVector>, Vec<PhaseVector>)> {
    let k = m.intersect(nn)?;
    let extend = |target: &Subspace| -> Result<Vec<PhaseVector>> {
        let d = target.d().get();
        let mut rows: Vec<Vec<u8>> = k.generators().to_vec();
        for r in target.generators() {
            rows.push(r.clone());
            if linalg::rank(&rows, target.ambient_dim(), d) < rows.len() {
                rows.pop();
            }
        }
        let n = target.n()?;
        Ok(rows
            .into_iter()
            .map(|r| {
                let c: Vec<i64> = r.iter().map(|&x| x as i64).collect();
                PhaseVector::new(target.d(), n, &c).expect("row length is 2n")
            })
            .collect())
    };
    Ok((extend(m)?, extend(nn)?))
}
