//! Linear algebra on the phase space `V = Z_d^{2n}` with the standard
//! symplectic form `[u, v] = u_p . v_q - u_q . v_p`.
//!
//! Subspaces are kept in reduced row echelon form. That form is unique, so
//! structural equality of [`Subspace`] values is subspace equality, hashing is
//! well defined, and enumeration order is reproducible.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{gaussian_binomial, Prime};
use crate::error::{Error, Result};
use crate::linalg;

/// Default cap on the number of subspaces an enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// A point of phase space, coordinates ordered `(p_1..p_n, q_1..q_n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseVector {
    d: Prime,
    n: usize,
    coords: Vec<u8>,
}

impl PhaseVector {
    /// Builds a vector from arbitrary integers, reducing each mod `d`.
    pub fn new(d: Prime, n: usize, coords: &[i64]) -> Result<Self> {
        if coords.len() != 2 * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                2 * n,
                coords.len()
            )));
        }
        let m = d.get() as i64;
        Ok(PhaseVector {
            d,
            n,
            coords: coords.iter().map(|&c| c.rem_euclid(m) as u8).collect(),
        })
    }

    pub fn from_pq(d: Prime, p: &[i64], q: &[i64]) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::DimensionMismatch(
                "momentum and position parts differ in length".into(),
            ));
        }
        let coords: Vec<i64> = p.iter().chain(q).copied().collect();
        PhaseVector::new(d, p.len(), &coords)
    }

    pub fn zero(d: Prime, n: usize) -> Self {
        PhaseVector {
            d,
            n,
            coords: vec![0; 2 * n],
        }
    }

    pub(crate) fn from_raw(d: Prime, n: usize, coords: Vec<u8>) -> Self {
        debug_assert_eq!(coords.len(), 2 * n);
        debug_assert!(coords.iter().all(|&c| (c as u32) < d.get()));
        PhaseVector { d, n, coords }
    }

    pub fn d(&self) -> Prime {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Residues in `0..d`.
    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    pub fn p(&self) -> &[u8] {
        &self.coords[..self.n]
    }

    pub fn q(&self) -> &[u8] {
        &self.coords[self.n..]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &PhaseVector) -> Result<()> {
        if self.d != other.d || self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "(d={}, n={}) vs (d={}, n={})",
                self.d, self.n, other.d, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PhaseVector) -> Result<PhaseVector> {
        self.check(other)?;
        let d = self.d.get();
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| linalg::add(a, b, d))
            .collect();
        Ok(PhaseVector::from_raw(self.d, self.n, coords))
    }

    pub fn sub(&self, other: &PhaseVector) -> Result<PhaseVector> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PhaseVector {
        self.scale(self.d.get() as u8 - 1)
    }

    pub fn scale(&self, c: u8) -> PhaseVector {
        let d = self.d.get();
        let coords = self.coords.iter().map(|&a| linalg::mul(a, c, d)).collect();
        PhaseVector::from_raw(self.d, self.n, coords)
    }
}

impl fmt::Debug for PhaseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}|{:?}", self.p(), self.q())
    }
}

impl Serialize for PhaseVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

/// Symplectic form on raw coordinate slices of length `2n`.
pub(crate) fn form_raw(u: &[u8], v: &[u8], d: u32) -> u8 {
    let n = u.len() / 2;
    let (up, uq) = u.split_at(n);
    let (vp, vq) = v.split_at(n);
    let pos = linalg::dot(up, vq, d);
    let negp = linalg::dot(uq, vp, d);
    linalg::sub(pos, negp, d)
}

/// The form evaluated on the integer lifts `0..d` of the coordinates, without
/// reducing mod `d`. This is the value that appears in exponents of `tau`.
pub(crate) fn form_lifted_raw(u: &[u8], v: &[u8]) -> i64 {
    let n = u.len() / 2;
    (0..n)
        .map(|i| u[i] as i64 * v[n + i] as i64 - u[n + i] as i64 * v[i] as i64)
        .sum()
}

/// `[u, v] mod d`.
pub fn symplectic_form(u: &PhaseVector, v: &PhaseVector) -> Result<u8> {
    u.check(v)?;
    Ok(form_raw(&u.coords, &v.coords, u.d.get()))
}

/// `[u, v]` computed in the integers from the lifts `0..d`.
pub fn symplectic_form_lifted(u: &PhaseVector, v: &PhaseVector) -> Result<i64> {
    u.check(v)?;
    Ok(form_lifted_raw(&u.coords, &v.coords))
}

/// A linear subspace of `Z_d^m`, stored as its RREF generator matrix.
///
/// For phase-space subspaces `m = 2n`; the symplectic operations reject odd
/// ambient dimensions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    d: Prime,
    ambient: usize,
    rows: Vec<Vec<u8>>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(d={}, {:?})", self.d, self.rows)
    }
}

/// Span of arbitrary rows of `Z_d^ambient`, in canonical form.
pub fn canonicalize(d: Prime, ambient: usize, rows: &[Vec<u8>]) -> Subspace {
    let mut rows: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| {
            debug_assert_eq!(r.len(), ambient);
            r.iter().map(|&x| (x as u32 % d.get()) as u8).collect()
        })
        .collect();
    linalg::rref(&mut rows, ambient, d.get());
    Subspace { d, ambient, rows }
}

impl Subspace {
    /// Span of phase-space vectors.
    pub fn span(d: Prime, n: usize, vectors: &[PhaseVector]) -> Result<Subspace> {
        for v in vectors {
            if v.d != d || v.n != n {
                return Err(Error::DimensionMismatch(format!(
                    "vector over (d={}, n={}) in a span over (d={d}, n={n})",
                    v.d, v.n
                )));
            }
        }
        let rows: Vec<Vec<u8>> = vectors.iter().map(|v| v.coords.clone()).collect();
        Ok(canonicalize(d, 2 * n, &rows))
    }

    pub fn zero(d: Prime, ambient: usize) -> Subspace {
        Subspace {
            d,
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(d: Prime, ambient: usize) -> Subspace {
        let rows = (0..ambient)
            .map(|i| {
                let mut r = vec![0u8; ambient];
                r[i] = 1;
                r
            })
            .collect();
        Subspace { d, ambient, rows }
    }

    pub fn d(&self) -> Prime {
        self.d
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Canonical generator rows.
    pub fn generators(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Pivot column of each generator row.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .position(|&x| x != 0)
                    .expect("RREF rows are nonzero")
            })
            .collect()
    }

    /// Half the ambient dimension, for phase-space subspaces.
    pub fn n(&self) -> Result<usize> {
        if !self.ambient.is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimension {} is not a phase space",
                self.ambient
            )));
        }
        Ok(self.ambient / 2)
    }

    /// Generators as phase-space vectors.
    pub fn basis(&self) -> Result<Vec<PhaseVector>> {
        let n = self.n()?;
        Ok(self
            .rows
            .iter()
            .map(|r| PhaseVector::from_raw(self.d, n, r.clone()))
            .collect())
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.d != other.d || self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of Z_{}^{} and Z_{}^{}",
                self.d, self.ambient, other.d, other.ambient
            )));
        }
        Ok(())
    }

    pub fn contains_raw(&self, v: &[u8]) -> bool {
        let d = self.d.get();
        let mut v = v.to_vec();
        for row in &self.rows {
            let p = row.iter().position(|&x| x != 0).unwrap();
            let c = v[p];
            if c != 0 {
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = linalg::sub(*a, linalg::mul(c, b, d), d);
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, v: &PhaseVector) -> bool {
        v.d == self.d && v.coords.len() == self.ambient && self.contains_raw(&v.coords)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.d == other.d
            && self.ambient == other.ambient
            && self.rows.iter().all(|r| other.contains_raw(r))
    }

    /// All `d^dim` elements, ordered lexicographically by their coefficient
    /// vector with respect to the canonical generators.
    pub fn elements(&self) -> Vec<Vec<u8>> {
        let d = self.d.get();
        let k = self.rows.len();
        let mut out = Vec::with_capacity((d as usize).pow(k as u32));
        let mut coeffs = vec![0u8; k];
        loop {
            let mut v = vec![0u8; self.ambient];
            for (c, row) in coeffs.iter().zip(&self.rows) {
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = linalg::add(*a, linalg::mul(*c, b, d), d);
                }
            }
            out.push(v);
            if !odometer(&mut coeffs, d) {
                break;
            }
        }
        out
    }

    /// Pairwise generator check of the symplectic form.
    pub fn is_isotropic(&self) -> bool {
        if !self.ambient.is_multiple_of(2) {
            return false;
        }
        let d = self.d.get();
        self.rows
            .iter()
            .enumerate()
            .all(|(i, a)| self.rows[i + 1..].iter().all(|b| form_raw(a, b, d) == 0))
    }

    pub fn is_lagrangian(&self) -> bool {
        self.ambient.is_multiple_of(2) && self.dim() == self.ambient / 2 && self.is_isotropic()
    }

    /// `{v : [v, s] = 0 for all s in self}`.
    pub fn complement(&self) -> Result<Subspace> {
        let n = self.n()?;
        // [v, s] = v_p . s_q - v_q . s_p, so the functional is (s_q, -s_p)
        let d = self.d.get();
        let functionals: Vec<Vec<u8>> = self
            .rows
            .iter()
            .map(|s| {
                s[n..]
                    .iter()
                    .copied()
                    .chain(s[..n].iter().map(|&x| linalg::neg(x, d)))
                    .collect()
            })
            .collect();
        let basis = linalg::nullspace(&functionals, self.ambient, d);
        Ok(canonicalize(self.d, self.ambient, &basis))
    }

    /// Annihilator with respect to the standard dot product.
    fn annihilator(&self) -> Vec<Vec<u8>> {
        linalg::nullspace(&self.rows, self.ambient, self.d.get())
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut eqs = self.annihilator();
        eqs.extend(other.annihilator());
        let basis = linalg::nullspace(&eqs, self.ambient, self.d.get());
        Ok(canonicalize(self.d, self.ambient, &basis))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let rows: Vec<Vec<u8>> = self.rows.iter().chain(&other.rows).cloned().collect();
        Ok(canonicalize(self.d, self.ambient, &rows))
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceJson {
    d: Prime,
    n: usize,
    dim: usize,
    generators: Vec<Vec<u8>>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.n().map_err(serde::ser::Error::custom)?;
        SubspaceJson {
            d: self.d,
            n,
            dim: self.dim(),
            generators: self.rows.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SubspaceJson::deserialize(de)?;
        if raw
            .generators
            .iter()
            .any(|g| g.len() != 2 * raw.n || g.iter().any(|&x| x as u32 >= raw.d.get()))
        {
            return Err(D::Error::custom("generator entries out of range"));
        }
        let s = canonicalize(raw.d, 2 * raw.n, &raw.generators);
        if s.dim() != raw.dim || s.rows != raw.generators {
            return Err(D::Error::custom("generators are not in canonical RREF"));
        }
        Ok(s)
    }
}

/// A Lagrangian (maximal isotropic, dimension `n`) subspace.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
#[serde(transparent)]
pub struct LagrangianSubspace(Subspace);

impl TryFrom<Subspace> for LagrangianSubspace {
    type Error = Error;
    fn try_from(s: Subspace) -> Result<Self> {
        if s.is_lagrangian() {
            Ok(LagrangianSubspace(s))
        } else {
            Err(Error::NotLagrangian)
        }
    }
}

impl<'de> Deserialize<'de> for LagrangianSubspace {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = Subspace::deserialize(de)?;
        LagrangianSubspace::try_from(s).map_err(serde::de::Error::custom)
    }
}

impl Deref for LagrangianSubspace {
    type Target = Subspace;
    fn deref(&self) -> &Subspace {
        &self.0
    }
}

impl LagrangianSubspace {
    pub fn n(&self) -> usize {
        self.0.ambient / 2
    }

    pub fn as_subspace(&self) -> &Subspace {
        &self.0
    }

    pub fn into_subspace(self) -> Subspace {
        self.0
    }

    /// The momentum plane `span{e_p1, .., e_pn}`.
    pub fn momentum_plane(d: Prime, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0u8; 2 * n];
                r[i] = 1;
                r
            })
            .collect();
        LagrangianSubspace(Subspace {
            d,
            ambient: 2 * n,
            rows,
        })
    }

    /// The position plane `span{e_q1, .., e_qn}`.
    pub fn position_plane(d: Prime, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0u8; 2 * n];
                r[n + i] = 1;
                r
            })
            .collect();
        LagrangianSubspace(Subspace {
            d,
            ambient: 2 * n,
            rows,
        })
    }

    /// `dim(self ∩ other)` computed as `n - rank([m_i, n_j])`, which holds
    /// because `other` equals its own complement.
    pub fn intersection_dim(&self, other: &LagrangianSubspace) -> Result<usize> {
        self.0.check(&other.0)?;
        let d = self.d.get();
        let gram: Vec<Vec<u8>> = self
            .rows
            .iter()
            .map(|a| other.rows.iter().map(|b| form_raw(a, b, d)).collect())
            .collect();
        Ok(self.n() - linalg::rank(&gram, self.n(), d))
    }
}

pub fn is_transverse(a: &LagrangianSubspace, b: &LagrangianSubspace) -> Result<bool> {
    Ok(a.intersect(b)?.dim() == 0)
}

/// Advances `digits` as a base-`d` counter with the last digit fastest.
/// Returns `false` after wrapping around to all zeros.
fn odometer(digits: &mut [u8], d: u32) -> bool {
    for x in digits.iter_mut().rev() {
        if (*x as u32) + 1 < d {
            *x += 1;
            return true;
        }
        *x = 0;
    }
    false
}

/// Advances a strictly increasing `k`-combination of `0..m` in lexicographic
/// order.
fn next_combination(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < m - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn check_cap(what: &'static str, count: &BigInt, cap: u64) -> Result<()> {
    match count.to_u64() {
        Some(c) if c <= cap => Ok(()),
        _ => Err(Error::cap(what, count, cap)),
    }
}

/// Streams every `k`-dimensional subspace of `Z_d^ambient` exactly once.
///
/// Order: pivot-column sets in lexicographic order, then the free RREF
/// entries (row-major) in lexicographic order.
pub struct SubspaceEnumerator {
    d: Prime,
    ambient: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    values: Vec<u8>,
    done: bool,
}

impl SubspaceEnumerator {
    fn free_positions(pivots: &[usize], ambient: usize) -> Vec<(usize, usize)> {
        let mut free = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for c in p + 1..ambient {
                if !pivots.contains(&c) {
                    free.push((i, c));
                }
            }
        }
        free
    }

    fn reset_pattern(&mut self) {
        self.free = Self::free_positions(&self.pivots, self.ambient);
        self.values = vec![0; self.free.len()];
    }

    fn current(&self) -> Subspace {
        let mut rows = vec![vec![0u8; self.ambient]; self.pivots.len()];
        for (row, &p) in rows.iter_mut().zip(&self.pivots) {
            row[p] = 1;
        }
        for (&(i, c), &v) in self.free.iter().zip(&self.values) {
            rows[i][c] = v;
        }
        Subspace {
            d: self.d,
            ambient: self.ambient,
            rows,
        }
    }
}

impl Iterator for SubspaceEnumerator {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let out = self.current();
        if !odometer(&mut self.values, self.d.get()) {
            if next_combination(&mut self.pivots, self.ambient) {
                self.reset_pattern();
            } else {
                self.done = true;
            }
        }
        Some(out)
    }
}

pub fn enumerate_subspaces(
    d: Prime,
    ambient: usize,
    k: usize,
    cap: u64,
) -> Result<SubspaceEnumerator> {
    if k > ambient {
        return Err(Error::InvalidArgument(format!(
            "cannot have a {k}-dimensional subspace of a {ambient}-dimensional space"
        )));
    }
    let count = gaussian_binomial(ambient as u32, k as u32, d);
    check_cap("subspace enumeration", &count, cap)?;
    let mut e = SubspaceEnumerator {
        d,
        ambient,
        pivots: (0..k).collect(),
        free: Vec::new(),
        values: Vec::new(),
        done: false,
    };
    e.reset_pattern();
    Ok(e)
}

/// Every Lagrangian of `Z_d^{2n}`, found by filtering the `n`-dimensional
/// subspaces. This deliberately avoids the isotropic-extension construction so
/// the two can check each other.
pub fn enumerate_lagrangians(
    d: Prime,
    n: usize,
    cap: u64,
) -> Result<impl Iterator<Item = LagrangianSubspace>> {
    Ok(enumerate_subspaces(d, 2 * n, n, cap)?
        .filter(Subspace::is_isotropic)
        .map(LagrangianSubspace))
}

/// Buckets all Lagrangians `N` by `dim(M ∩ N)`.
pub fn intersection_spectrum(m: &LagrangianSubspace, cap: u64) -> Result<BTreeMap<usize, u64>> {
    let all: Vec<LagrangianSubspace> = enumerate_lagrangians(m.d, m.n(), cap)?.collect();
    let dims: Vec<usize> = all
        .par_iter()
        .map(|nn| m.intersection_dim(nn))
        .collect::<Result<_>>()?;
    let mut spectrum: BTreeMap<usize, u64> = (0..=m.n()).map(|k| (k, 0)).collect();
    for k in dims {
        *spectrum.get_mut(&k).unwrap() += 1;
    }
    Ok(spectrum)
}

/// The symplectic reduction `W / (W ∩ W^⊥)`.
#[derive(Clone, Debug)]
pub struct ReducedSpace {
    whole: Subspace,
    radical: Subspace,
    basis: Vec<Vec<u8>>,
    gram: Vec<Vec<u8>>,
}

impl ReducedSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn whole(&self) -> &Subspace {
        &self.whole
    }

    /// `W ∩ W^⊥`.
    pub fn radical(&self) -> &Subspace {
        &self.radical
    }

    /// Representatives in `W` of a basis of the quotient.
    pub fn basis(&self) -> Result<Vec<PhaseVector>> {
        let n = self.whole.n()?;
        Ok(self
            .basis
            .iter()
            .map(|r| PhaseVector::from_raw(self.whole.d, n, r.clone()))
            .collect())
    }

    /// Induced form on the basis, `gram[i][j] = [b_i, b_j]`.
    pub fn gram(&self) -> &[Vec<u8>] {
        &self.gram
    }

    pub fn is_nondegenerate(&self) -> bool {
        linalg::rank(&self.gram, self.dim(), self.whole.d.get()) == self.dim()
    }

    /// Coordinates of the class `[v]` in the quotient basis.
    pub fn project(&self, v: &[u8]) -> Result<Vec<u8>> {
        let mut full = self.basis.clone();
        full.extend(self.radical.rows.iter().cloned());
        let mut c = linalg::coordinates(&full, v, self.whole.d.get()).ok_or(Error::NotInSpan)?;
        c.truncate(self.dim());
        Ok(c)
    }

    /// The representative `sum_i c_i b_i` of a class given by coordinates.
    pub fn lift(&self, coords: &[u8]) -> Vec<u8> {
        let d = self.whole.d.get();
        let mut v = vec![0u8; self.whole.ambient];
        for (&c, b) in coords.iter().zip(&self.basis) {
            for (a, &x) in v.iter_mut().zip(b) {
                *a = linalg::add(*a, linalg::mul(c, x, d), d);
            }
        }
        v
    }

    /// Induced form on quotient coordinates.
    pub fn form(&self, a: &[u8], b: &[u8]) -> u8 {
        quotient_form(&self.gram, a, b, self.whole.d.get())
    }
}

fn quotient_form(gram: &[Vec<u8>], a: &[u8], b: &[u8], d: u32) -> u8 {
    let mut s = 0u8;
    for (i, &ai) in a.iter().enumerate() {
        if ai != 0 {
            s = linalg::add(s, linalg::mul(ai, linalg::dot(&gram[i], b, d), d), d);
        }
    }
    s
}

pub fn symplectic_reduce(w: &Subspace) -> Result<ReducedSpace> {
    let radical = w.intersect(&w.complement()?)?;
    let d = w.d.get();
    let mut span = radical.rows.clone();
    let mut basis = Vec::new();
    for r in &w.rows {
        span.push(r.clone());
        if linalg::rank(&span, w.ambient, d) == span.len() {
            basis.push(r.clone());
        } else {
            span.pop();
        }
    }
    let gram = basis
        .iter()
        .map(|a| basis.iter().map(|b| form_raw(a, b, d)).collect())
        .collect();
    Ok(ReducedSpace {
        whole: w.clone(),
        radical,
        basis,
        gram,
    })
}

/// Given a basis `e` of a Lagrangian `L` in a symplectic space described by a
/// non-degenerate `gram`, returns vectors `f` with `[e_i, f_j] = δ_ij` and
/// `[f_i, f_j] = 0`. Each `f_j` is the particular solution of its linear
/// system with free variables set to zero, so the result is deterministic.
fn isotropic_dual(gram: &[Vec<u8>], e: &[Vec<u8>], d: u32) -> Vec<Vec<u8>> {
    let dim = gram.len();
    let functional = |a: &[u8]| -> Vec<u8> {
        // x -> [a, x] = sum_i a_i gram[i] . x
        let mut row = vec![0u8; dim];
        for (i, &ai) in a.iter().enumerate() {
            for (r, &g) in row.iter_mut().zip(&gram[i]) {
                *r = linalg::add(*r, linalg::mul(ai, g, d), d);
            }
        }
        row
    };
    let mut f: Vec<Vec<u8>> = Vec::with_capacity(e.len());
    for j in 0..e.len() {
        let mut eqs: Vec<Vec<u8>> = e.iter().map(|a| functional(a)).collect();
        let mut rhs: Vec<u8> = (0..e.len()).map(|i| (i == j) as u8).collect();
        for prev in &f {
            eqs.push(functional(prev));
            rhs.push(0);
        }
        let x = linalg::solve(&eqs, &rhs, dim, d)
            .expect("independent functionals of a non-degenerate form are solvable");
        f.push(x);
    }
    f
}

fn standard_gram(d: Prime, n: usize) -> Vec<Vec<u8>> {
    let dd = d.get();
    (0..2 * n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if i < n && j == i + n {
                        1
                    } else if i >= n && j + n == i {
                        linalg::neg(1, dd)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

/// Enumerates symmetric `m×m` matrices over `Z_d`, upper triangle in
/// row-major lexicographic order.
fn symmetric_matrices(m: usize, d: u32) -> Vec<Vec<Vec<u8>>> {
    let slots: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let mut vals = vec![0u8; slots.len()];
    let mut out = Vec::new();
    loop {
        let mut a = vec![vec![0u8; m]; m];
        for (&(i, j), &v) in slots.iter().zip(&vals) {
            a[i][j] = v;
            a[j][i] = v;
        }
        out.push(a);
        if !odometer(&mut vals, d) {
            break;
        }
    }
    out
}

/// Lagrangians `N` with `M ∩ N = K`, built from the reduction
/// `K^⊥ / K` and symmetric matrices over the reduced space.
pub fn extensions_through(m: &LagrangianSubspace, k: &Subspace) -> Result<Vec<LagrangianSubspace>> {
    m.0.check(k)?;
    if !k.is_subspace_of(m) {
        return Err(Error::NotContained);
    }
    let n = m.n();
    let rest = n - k.dim();
    if rest == 0 {
        return Ok(vec![m.clone()]);
    }
    let d = m.d.get();
    let reduced = symplectic_reduce(&k.complement()?)?;
    debug_assert_eq!(reduced.radical(), k);
    debug_assert_eq!(reduced.dim(), 2 * rest);

    // basis of M/K inside the quotient
    let mut e: Vec<Vec<u8>> = Vec::new();
    for row in &m.rows {
        let c = reduced.project(row)?;
        e.push(c);
        if linalg::rank(&e, reduced.dim(), d) < e.len() {
            e.pop();
        }
    }
    debug_assert_eq!(e.len(), rest);
    let f = isotropic_dual(&reduced.gram, &e, d);

    let mut out = Vec::new();
    for a in symmetric_matrices(rest, d) {
        let mut rows: Vec<Vec<u8>> = k.rows.clone();
        for j in 0..rest {
            let mut g = f[j].clone();
            for i in 0..rest {
                for (x, &y) in g.iter_mut().zip(&e[i]) {
                    *x = linalg::add(*x, linalg::mul(a[i][j], y, d), d);
                }
            }
            rows.push(reduced.lift(&g));
        }
        let s = canonicalize(m.d, m.ambient, &rows);
        debug_assert!(s.is_lagrangian());
        out.push(LagrangianSubspace(s));
    }
    Ok(out)
}

/// The symplectic basis adapted to `M`: `M`'s canonical generators `e_i`
/// followed by isotropic duals `f_j` with `[e_i, f_j] = δ_ij`.
pub fn adapted_basis(m: &LagrangianSubspace) -> (Vec<PhaseVector>, Vec<PhaseVector>) {
    let n = m.n();
    let gram = standard_gram(m.d, n);
    let f = isotropic_dual(&gram, &m.rows, m.d.get());
    let wrap = |rows: &[Vec<u8>]| -> Vec<PhaseVector> {
        rows.iter()
            .map(|r| PhaseVector::from_raw(m.d, n, r.clone()))
            .collect()
    };
    (wrap(&m.rows), wrap(&f))
}

/// For `N` transverse to `M`, the symmetric matrix `A` with
/// `N = span{f_j + sum_i A_ij e_i}` in the basis adapted to `M`.
/// `None` when `N` is not transverse to `M`.
pub fn graph_form(nn: &LagrangianSubspace, m: &LagrangianSubspace) -> Result<Option<Vec<Vec<u8>>>> {
    m.0.check(&nn.0)?;
    if m.intersection_dim(nn)? != 0 {
        return Ok(None);
    }
    let n = m.n();
    let d = m.d.get();
    let (e, f) = adapted_basis(m);
    let e: Vec<Vec<u8>> = e.into_iter().map(|v| v.coords).collect();
    let mut a = vec![vec![0u8; n]; n];
    for j in 0..n {
        // g in N with [e_i, g] = δ_ij, as a combination of N's generators
        let eqs: Vec<Vec<u8>> = e
            .iter()
            .map(|ei| nn.rows.iter().map(|r| form_raw(ei, r, d)).collect())
            .collect();
        let rhs: Vec<u8> = (0..n).map(|i| (i == j) as u8).collect();
        let c = linalg::solve(&eqs, &rhs, n, d).expect("transverse pairing is invertible");
        let mut g = vec![0u8; 2 * n];
        for (&ci, r) in c.iter().zip(&nn.rows) {
            for (x, &y) in g.iter_mut().zip(r) {
                *x = linalg::add(*x, linalg::mul(ci, y, d), d);
            }
        }
        let h: Vec<u8> = g
            .iter()
            .zip(&f[j].coords)
            .map(|(&x, &y)| linalg::sub(x, y, d))
            .collect();
        let col = linalg::coordinates(&e, &h, d).expect("g_j - f_j lies in M");
        for i in 0..n {
            a[i][j] = col[i];
        }
    }
    Ok(Some(a))
}

pub fn is_graph_lagrangian(nn: &LagrangianSubspace, m: &LagrangianSubspace) -> Result<bool> {
    Ok(graph_form(nn, m)?.is_some())
}

/// Inverse of [`graph_form`]: the Lagrangian `span{f_j + sum_i A_ij e_i}`.
pub fn graph_lagrangian(m: &LagrangianSubspace, a: &[Vec<u8>]) -> Result<LagrangianSubspace> {
    let n = m.n();
    let d = m.d.get();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "adjacency must be {n}x{n}"
        )));
    }
    if (0..n).any(|i| (0..n).any(|j| a[i][j] != a[j][i] || a[i][j] as u32 >= d)) {
        return Err(Error::InvalidArgument(
            "adjacency must be a symmetric matrix over Z_d".into(),
        ));
    }
    let (e, f) = adapted_basis(m);
    let rows: Vec<Vec<u8>> = (0..n)
        .map(|j| {
            let mut g = f[j].coords.clone();
            for i in 0..n {
                for (x, &y) in g.iter_mut().zip(&e[i].coords) {
                    *x = linalg::add(*x, linalg::mul(a[i][j], y, d), d);
                }
            }
            g
        })
        .collect();
    LagrangianSubspace::try_from(canonicalize(m.d, 2 * n, &rows))
}

/// The canonical representative of `[v]_M`: `v` reduced to zero on `M`'s
/// pivot coordinates.
pub fn canonical_representative(m: &LagrangianSubspace, v: &PhaseVector) -> Result<PhaseVector> {
    if v.d != m.d || v.coords.len() != m.ambient {
        return Err(Error::DimensionMismatch(
            "vector and Lagrangian differ".into(),
        ));
    }
    let d = m.d.get();
    let mut c = v.coords.clone();
    for row in &m.rows {
        let p = row.iter().position(|&x| x != 0).unwrap();
        let s = c[p];
        if s != 0 {
            for (a, &b) in c.iter_mut().zip(row) {
                *a = linalg::sub(*a, linalg::mul(s, b, d), d);
            }
        }
    }
    Ok(PhaseVector::from_raw(m.d, m.n(), c))
}

/// One canonical representative per coset of `V / M`, `d^n` in total,
/// lexicographic in the non-pivot coordinates.
pub fn coset_representatives(m: &LagrangianSubspace) -> impl Iterator<Item = PhaseVector> {
    let n = m.n();
    let d = m.d;
    let pivots = m.pivots();
    let free: Vec<usize> = (0..2 * n).filter(|c| !pivots.contains(c)).collect();
    let mut values = vec![0u8; free.len()];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut coords = vec![0u8; 2 * n];
        for (&c, &v) in free.iter().zip(&values) {
            coords[c] = v;
        }
        done = !odometer(&mut values, d.get());
        Some(PhaseVector::from_raw(d, n, coords))
    })
}
