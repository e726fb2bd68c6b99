//! Weyl (generalized Pauli) operators `w(p, q) = τ^{-p·q} ẑ(p) x̂(q)`.
//!
//! Operators are tracked symbolically as `τ^e w(v)` with `v` in canonical
//! residues `0..d`, and realized as dense matrices only on demand. Exponents
//! of `τ` are integers: they are computed from the lifts `0..d` of the
//! coordinates and reduced modulo the order of `τ` (`2d` for `d = 2`, `d` for
//! odd `d`). Because of this `w` is *not* periodic in its arguments when `d`
//! is even, and [`weyl_lifted`] realizes it for arbitrary integer arguments.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::combinatorics::Prime;
use crate::error::{Error, Result};
use crate::linalg;
use crate::symplectic::{form_lifted_raw, PhaseVector};

/// Default cap on the Hilbert-space dimension `D = d^n` of dense realizations.
pub const DEFAULT_MATRIX_CAP: u64 = 4096;

/// Max-norm tolerance for Weyl identities.
pub const WEYL_TOLERANCE: f64 = 1e-12;

/// A power `τ^e` of `τ = exp(iπ(d²+1)/d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TauPhase {
    d: Prime,
    exponent: u32,
}

impl TauPhase {
    pub fn order(d: Prime) -> u32 {
        if d.is_even() {
            2 * d.get()
        } else {
            d.get()
        }
    }

    pub fn new(d: Prime, exponent: i64) -> Self {
        let order = Self::order(d) as i64;
        TauPhase {
            d,
            exponent: exponent.rem_euclid(order) as u32,
        }
    }

    pub fn one(d: Prime) -> Self {
        TauPhase { d, exponent: 0 }
    }

    /// `ω^k = τ^{2k}`.
    pub fn omega(d: Prime, k: i64) -> Self {
        TauPhase::new(d, 2 * k)
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0
    }

    pub fn inv(self) -> TauPhase {
        TauPhase::new(self.d, -(self.exponent as i64))
    }

    pub fn value(&self) -> Complex64 {
        tau_power(self.d, self.exponent as i64)
    }
}

impl std::ops::Mul for TauPhase {
    type Output = TauPhase;

    fn mul(self, other: TauPhase) -> TauPhase {
        debug_assert_eq!(self.d, other.d);
        TauPhase::new(self.d, self.exponent as i64 + other.exponent as i64)
    }
}

/// `τ^e` as a complex number.
pub fn tau_power(d: Prime, e: i64) -> Complex64 {
    let dd = d.get() as i64;
    // τ^e = exp(iπ (d²+1) e / d); reduce the numerator mod 2d first
    let num = ((dd * dd + 1) * e).rem_euclid(2 * dd);
    Complex64::from_polar(1.0, std::f64::consts::PI * num as f64 / dd as f64)
}

/// A dense `D×D` complex matrix on `(C^d)^{⊗n}`, basis `|q_1 … q_n⟩` in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator(DMatrix<Complex64>);

impl DenseOperator {
    pub fn identity(dim: usize) -> Self {
        DenseOperator(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        DenseOperator(DMatrix::zeros(dim, dim))
    }

    pub fn from_matrix(m: DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        DenseOperator(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn mul(&self, other: &DenseOperator) -> DenseOperator {
        DenseOperator(&self.0 * &other.0)
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator(self.0.adjoint())
    }

    pub fn scale(&self, c: Complex64) -> DenseOperator {
        DenseOperator(&self.0 * c)
    }

    pub fn add_scaled(&mut self, c: Complex64, other: &DenseOperator) {
        self.0 += &other.0 * c;
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn unitarity_error(&self) -> f64 {
        self.mul(&self.adjoint())
            .max_abs_diff(&DenseOperator::identity(self.dim()))
    }
}

pub(crate) fn hilbert_dim(d: Prime, n: usize, cap: u64) -> Result<usize> {
    let dim = (d.get() as u64).checked_pow(n as u32);
    match dim {
        Some(x) if x <= cap => Ok(x as usize),
        _ => Err(Error::cap(
            "Hilbert-space dimension",
            num_traits::pow(num_bigint::BigInt::from(d.get()), n),
            cap,
        )),
    }
}

/// Realizes `ẑ(p) x̂(q)` times `τ^{extra}` for integer (unreduced) arguments.
/// Column `x` maps to row `x + q` with phase `τ^{extra + 2 p·(x+q)}`.
fn monomial(d: Prime, p: &[i64], q: &[i64], extra: i64, cap: u64) -> Result<DenseOperator> {
    let n = p.len();
    let dim = hilbert_dim(d, n, cap)?;
    let dd = d.get() as i64;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    let mut digits = vec![0i64; n];
    for col in 0..dim {
        let mut row = 0usize;
        let mut e = extra;
        for i in 0..n {
            let y = (digits[i] + q[i]).rem_euclid(dd);
            e += 2 * p[i] * y;
            row = row * dd as usize + y as usize;
        }
        m[(row, col)] = tau_power(d, e);
        // advance digits, last register fastest
        for x in digits.iter_mut().rev() {
            *x += 1;
            if *x < dd {
                break;
            }
            *x = 0;
        }
    }
    Ok(DenseOperator(m))
}

/// `x̂(q) |x⟩ = |x + q⟩`.
pub fn shift(d: Prime, q: &[i64], cap: u64) -> Result<DenseOperator> {
    monomial(d, &vec![0; q.len()], q, 0, cap)
}

/// `ẑ(p) |x⟩ = ω^{p·x} |x⟩`.
pub fn boost(d: Prime, p: &[i64], cap: u64) -> Result<DenseOperator> {
    monomial(d, p, &vec![0; p.len()], 0, cap)
}

/// `w(p, q)` for arbitrary integer `p, q`; `τ^{-p·q}` uses the given integers.
pub fn weyl_lifted(d: Prime, p: &[i64], q: &[i64], cap: u64) -> Result<DenseOperator> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch("p and q differ in length".into()));
    }
    let pq: i64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
    monomial(d, p, q, -pq, cap)
}

fn lifts(v: &PhaseVector) -> (Vec<i64>, Vec<i64>) {
    (
        v.p().iter().map(|&x| x as i64).collect(),
        v.q().iter().map(|&x| x as i64).collect(),
    )
}

/// `w(v)` with `v` read through its canonical lift `0..d`.
pub fn weyl(v: &PhaseVector, cap: u64) -> Result<DenseOperator> {
    let (p, q) = lifts(v);
    weyl_lifted(v.d(), &p, &q, cap)
}

/// Symbolic `τ^phase · w(point)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylOperator {
    pub phase: TauPhase,
    pub point: PhaseVector,
}

impl WeylOperator {
    pub fn new(point: PhaseVector) -> Self {
        WeylOperator {
            phase: TauPhase::one(point.d()),
            point,
        }
    }

    pub fn identity(d: Prime, n: usize) -> Self {
        WeylOperator::new(PhaseVector::zero(d, n))
    }

    /// `τ^a w(u) · τ^b w(v) = τ^{a+b+[u,v]} w(u+v)`, with the integer sum
    /// `u + v` folded back to canonical residues.
    pub fn mul(&self, other: &WeylOperator) -> Result<WeylOperator> {
        let u = &self.point;
        let v = &other.point;
        if u.d() != v.d() || u.n() != v.n() {
            return Err(Error::DimensionMismatch(
                "Weyl operators on different spaces".into(),
            ));
        }
        let d = u.d();
        let dd = d.get() as i64;
        let n = u.n();
        let int_sum: Vec<i64> = u
            .coords()
            .iter()
            .zip(v.coords())
            .map(|(&a, &b)| a as i64 + b as i64)
            .collect();
        let reduced: Vec<i64> = int_sum.iter().map(|x| x % dd).collect();
        // w(P, Q) = τ^{r_p·r_q - P·Q} w(r_p, r_q) since ẑ and x̂ are periodic
        let dot = |x: &[i64]| -> i64 { (0..n).map(|i| x[i] * x[n + i]).sum() };
        let fold = dot(&reduced) - dot(&int_sum);
        let e = self.phase.exponent as i64
            + other.phase.exponent as i64
            + form_lifted_raw(u.coords(), v.coords())
            + fold;
        Ok(WeylOperator {
            phase: TauPhase::new(d, e),
            point: PhaseVector::new(d, n, &reduced)?,
        })
    }

    pub fn pow(&self, k: u32) -> Result<WeylOperator> {
        let mut acc = WeylOperator::identity(self.point.d(), self.point.n());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Image of the basis vector `|x⟩` (lexicographic index): returns the
    /// target index and the amplitude.
    pub fn apply_to_basis(&self, x: usize) -> (usize, Complex64) {
        let d = self.point.d();
        let dd = d.get() as usize;
        let n = self.point.n();
        let (p, q) = (self.point.p(), self.point.q());
        let mut rest = x;
        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            digits[i] = rest % dd;
            rest /= dd;
        }
        let mut e = self.phase.exponent as i64;
        let mut row = 0usize;
        for i in 0..n {
            let y = (digits[i] + q[i] as usize) % dd;
            e += 2 * p[i] as i64 * y as i64 - p[i] as i64 * q[i] as i64;
            row = row * dd + y;
        }
        (row, tau_power(d, e))
    }

    /// Applies the operator to a state of length `d^n`.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for (x, &a) in psi.iter().enumerate() {
            if a != Complex64::new(0.0, 0.0) {
                let (y, c) = self.apply_to_basis(x);
                out[y] += c * a;
            }
        }
        out
    }

    pub fn to_dense(&self, cap: u64) -> Result<DenseOperator> {
        let (p, q) = lifts(&self.point);
        let pq: i64 = p.iter().zip(&q).map(|(a, b)| a * b).sum();
        monomial(self.point.d(), &p, &q, self.phase.exponent as i64 - pq, cap)
    }
}

/// Expansion coefficients of `m` in `basis`, each in `0..d`.
pub fn basis_coefficients(basis: &[PhaseVector], m: &PhaseVector) -> Result<Vec<u8>> {
    let d = m.d().get();
    let rows: Vec<Vec<u8>> = basis.iter().map(|b| b.coords().to_vec()).collect();
    if basis.iter().any(|b| b.d() != m.d() || b.n() != m.n()) {
        return Err(Error::DimensionMismatch("basis and vector differ".into()));
    }
    if linalg::rank(&rows, 2 * m.n(), d) != rows.len() {
        return Err(Error::InvalidArgument(
            "basis vectors are linearly dependent".into(),
        ));
    }
    linalg::coordinates(&rows, m.coords(), d).ok_or(Error::NotInSpan)
}

/// `w_B(m) = prod_i w(u_i)^{m_i}` as a symbolic operator.
pub fn weyl_basis_symbolic(basis: &[PhaseVector], m: &PhaseVector) -> Result<WeylOperator> {
    let coeffs = basis_coefficients(basis, m)?;
    let mut acc = WeylOperator::identity(m.d(), m.n());
    for (u, &c) in basis.iter().zip(&coeffs) {
        acc = acc.mul(&WeylOperator::new(u.clone()).pow(c as u32)?)?;
    }
    Ok(acc)
}

/// `w_B(m) = prod_i w(u_i)^{m_i}` by multiplying dense matrices.
pub fn weyl_basis(basis: &[PhaseVector], m: &PhaseVector, cap: u64) -> Result<DenseOperator> {
    let coeffs = basis_coefficients(basis, m)?;
    let dim = hilbert_dim(m.d(), m.n(), cap)?;
    let mut acc = DenseOperator::identity(dim);
    for (u, &c) in basis.iter().zip(&coeffs) {
        let w = weyl(u, cap)?;
        for _ in 0..c {
            acc = acc.mul(&w);
        }
    }
    Ok(acc)
}

/// Checks `w(u) w(v) = τ^{[u,v]} w(u+v)` where `u + v` is the integer sum of
/// the canonical lifts.
pub fn verify_composition(u: &PhaseVector, v: &PhaseVector, cap: u64) -> Result<bool> {
    let lhs = weyl(u, cap)?.mul(&weyl(v, cap)?);
    let (up, uq) = lifts(u);
    let (vp, vq) = lifts(v);
    let p: Vec<i64> = up.iter().zip(&vp).map(|(a, b)| a + b).collect();
    let q: Vec<i64> = uq.iter().zip(&vq).map(|(a, b)| a + b).collect();
    let phase = tau_power(u.d(), crate::symplectic::symplectic_form_lifted(u, v)?);
    let rhs = weyl_lifted(u.d(), &p, &q, cap)?.scale(phase);
    Ok(lhs.max_abs_diff(&rhs) <= WEYL_TOLERANCE)
}

/// Checks `w(u) w(v) = ω^{[u,v]} w(v) w(u)`.
pub fn verify_commutation(u: &PhaseVector, v: &PhaseVector, cap: u64) -> Result<bool> {
    let wu = weyl(u, cap)?;
    let wv = weyl(v, cap)?;
    let k = crate::symplectic::symplectic_form(u, v)? as i64;
    let rhs = wv.mul(&wu).scale(TauPhase::omega(u.d(), k).value());
    Ok(wu.mul(&wv).max_abs_diff(&rhs) <= WEYL_TOLERANCE)
}

/// Checks `tr w(v) = d^n δ_{v,0}`.
pub fn verify_trace(v: &PhaseVector, cap: u64) -> Result<bool> {
    let w = weyl(v, cap)?;
    let expected = if v.is_zero() { w.dim() as f64 } else { 0.0 };
    Ok((w.trace() - Complex64::new(expected, 0.0)).norm() <= WEYL_TOLERANCE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{enumerate_lagrangians, Subspace};

    const CAP: u64 = DEFAULT_MATRIX_CAP;

    fn p(d: u64) -> Prime {
        Prime::new(d).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat(rows: [[Complex64; 2]; 2]) -> DenseOperator {
        DenseOperator::from_matrix(DMatrix::from_fn(2, 2, |i, j| rows[i][j]))
    }

    fn all_vectors(d: Prime, n: usize) -> Vec<PhaseVector> {
        let dd = d.get() as i64;
        let total = dd.pow(2 * n as u32);
        (0..total)
            .map(|mut idx| {
                let mut coords = vec![0i64; 2 * n];
                for x in coords.iter_mut().rev() {
                    *x = idx % dd;
                    idx /= dd;
                }
                PhaseVector::new(d, n, &coords).unwrap()
            })
            .collect()
    }

    #[test]
    fn tau_conventions() {
        assert!((tau_power(p(2), 1) - c(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(TauPhase::order(p(2)), 4);
        assert_eq!(TauPhase::order(p(3)), 3);
        for d in [3u64, 5, 7] {
            let w = TauPhase::omega(p(d), 1).value();
            let expected = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
            assert!((w - expected).norm() < 1e-14);
            assert!((tau_power(p(d), d as i64) - c(1.0, 0.0)).norm() < 1e-14);
        }
        assert!((tau_power(p(2), 2) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn qubit_paulis() {
        let d = p(2);
        let x = mat([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]]);
        let z = mat([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]]);
        let y = mat([[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]]);
        assert!(shift(d, &[1], CAP).unwrap().max_abs_diff(&x) < 1e-15);
        assert!(boost(d, &[1], CAP).unwrap().max_abs_diff(&z) < 1e-15);
        assert_eq!(shift(d, &[0], CAP).unwrap(), DenseOperator::identity(2));
        let w11 = weyl(&PhaseVector::new(d, 1, &[1, 1]).unwrap(), CAP).unwrap();
        assert!(w11.max_abs_diff(&y) < 1e-15);
        assert_eq!(
            weyl(&PhaseVector::zero(d, 2), CAP).unwrap(),
            DenseOperator::identity(4)
        );
    }

    #[test]
    fn weyl_identities_exhaustive() {
        for (d, n) in [(2, 1), (2, 2), (3, 1)] {
            let vs = all_vectors(p(d), n);
            for u in &vs {
                assert!(verify_trace(u, CAP).unwrap());
                assert!(weyl(u, CAP).unwrap().unitarity_error() < WEYL_TOLERANCE);
                for v in &vs {
                    assert!(verify_composition(u, v, CAP).unwrap(), "{u:?} {v:?}");
                    assert!(verify_commutation(u, v, CAP).unwrap(), "{u:?} {v:?}");
                }
            }
        }
    }

    #[test]
    fn composition_needs_the_integer_sum() {
        // with reduced u + v the qubit relation picks up a sign: YZ = iX, but
        // τ^{[u,v]} w((u+v) mod 2) = -iX
        let d = p(2);
        let y = PhaseVector::new(d, 1, &[1, 1]).unwrap();
        let z = PhaseVector::new(d, 1, &[1, 0]).unwrap();
        let lhs = weyl(&y, CAP).unwrap().mul(&weyl(&z, CAP).unwrap());
        let reduced = weyl(&y.add(&z).unwrap(), CAP)
            .unwrap()
            .scale(tau_power(d, -1));
        assert!(lhs.max_abs_diff(&reduced) > 1.0);
        assert!(verify_composition(&y, &z, CAP).unwrap());
    }

    #[test]
    fn symbolic_product_matches_dense() {
        for (d, n) in [(2, 1), (2, 2), (3, 1), (5, 1)] {
            let vs = all_vectors(p(d), n);
            for u in &vs {
                for v in &vs {
                    let a = WeylOperator {
                        phase: TauPhase::new(p(d), 1),
                        point: u.clone(),
                    };
                    let b = WeylOperator::new(v.clone());
                    let ab = a.mul(&b).unwrap();
                    let sym = ab.to_dense(CAP).unwrap();
                    let dense = a.to_dense(CAP).unwrap().mul(&b.to_dense(CAP).unwrap());
                    assert!(sym.max_abs_diff(&dense) < 1e-12);
                    for x in 0..sym.dim() {
                        let (y, amp) = ab.apply_to_basis(x);
                        assert!((sym.get(y, x) - amp).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn basis_representation() {
        // odd d: w_B(m) = w(m)
        for m in enumerate_lagrangians(p(3), 2, 1000).unwrap() {
            let b = m.basis().unwrap();
            for e in m.elements() {
                let v = PhaseVector::new(p(3), 2, &e.iter().map(|&x| x as i64).collect::<Vec<_>>())
                    .unwrap();
                let sym = weyl_basis_symbolic(&b, &v).unwrap();
                assert!(sym.phase.is_one());
                assert_eq!(sym.point, v);
            }
        }
        // d = 2, q-plane: w_B(e_q1 + e_q2) = X ⊗ X
        let d = p(2);
        let b = vec![
            PhaseVector::new(d, 2, &[0, 0, 1, 0]).unwrap(),
            PhaseVector::new(d, 2, &[0, 0, 0, 1]).unwrap(),
        ];
        let m = PhaseVector::new(d, 2, &[0, 0, 1, 1]).unwrap();
        let xx = shift(d, &[1, 1], CAP).unwrap();
        assert!(weyl_basis(&b, &m, CAP).unwrap().max_abs_diff(&xx) < 1e-15);
        let zero = PhaseVector::zero(d, 2);
        assert_eq!(
            weyl_basis(&b, &zero, CAP).unwrap(),
            DenseOperator::identity(4)
        );
        let outside = PhaseVector::new(d, 2, &[1, 0, 0, 0]).unwrap();
        assert_eq!(weyl_basis(&b, &outside, CAP), Err(Error::NotInSpan));
    }

    #[test]
    fn basis_representation_is_a_group_law() {
        for (d, n) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
            for m in enumerate_lagrangians(p(d), n, 1000).unwrap() {
                let b = m.basis().unwrap();
                let elems: Vec<PhaseVector> = m
                    .elements()
                    .iter()
                    .map(|e| {
                        PhaseVector::new(p(d), n, &e.iter().map(|&x| x as i64).collect::<Vec<_>>())
                            .unwrap()
                    })
                    .collect();
                let dense: Vec<DenseOperator> = elems
                    .iter()
                    .map(|e| weyl_basis(&b, e, CAP).unwrap())
                    .collect();
                for (i, x) in elems.iter().enumerate() {
                    let sym = weyl_basis_symbolic(&b, x).unwrap().to_dense(CAP).unwrap();
                    assert!(sym.max_abs_diff(&dense[i]) < 1e-12);
                    for (j, y) in elems.iter().enumerate() {
                        let k = elems.iter().position(|z| *z == x.add(y).unwrap()).unwrap();
                        assert!(dense[i].mul(&dense[j]).max_abs_diff(&dense[k]) < WEYL_TOLERANCE);
                    }
                }
            }
        }
    }

    #[test]
    fn even_d_needs_the_basis_phase() {
        // Bell Lagrangian span{ZZ, XX}: w(ZZ) w(XX) = -w(YY)
        let d = p(2);
        let zz = PhaseVector::new(d, 2, &[1, 1, 0, 0]).unwrap();
        let xx = PhaseVector::new(d, 2, &[0, 0, 1, 1]).unwrap();
        let m = Subspace::span(d, 2, &[zz.clone(), xx.clone()]).unwrap();
        assert!(m.is_lagrangian());
        let yy = zz.add(&xx).unwrap();
        let sym = weyl_basis_symbolic(&[zz, xx], &yy).unwrap();
        assert_eq!(sym.phase, TauPhase::new(d, 2));
    }

    #[test]
    fn matrix_cap() {
        assert!(matches!(
            shift(p(2), &[0; 13], DEFAULT_MATRIX_CAP),
            Err(Error::CapExceeded { .. })
        ));
        assert!(shift(p(2), &[0; 12], DEFAULT_MATRIX_CAP).is_ok());
    }
}
