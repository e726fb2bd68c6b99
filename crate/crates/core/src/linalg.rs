//! Dense Gauss-Jordan elimination over `Z_d`, `d` prime.
//!
//! Rows are `Vec<u8>` with every entry in `0..d`. Every ring operation is
//! followed by an explicit reduction mod `d`.

#[inline]
pub(crate) fn add(a: u8, b: u8, d: u32) -> u8 {
    ((a as u32 + b as u32) % d) as u8
}

#[inline]
pub(crate) fn sub(a: u8, b: u8, d: u32) -> u8 {
    ((a as u32 + d - b as u32) % d) as u8
}

#[inline]
pub(crate) fn mul(a: u8, b: u8, d: u32) -> u8 {
    ((a as u32 * b as u32) % d) as u8
}

#[inline]
pub(crate) fn neg(a: u8, d: u32) -> u8 {
    ((d - a as u32) % d) as u8
}

pub(crate) fn inv(a: u8, d: u32) -> u8 {
    debug_assert!(a != 0);
    // Fermat: a^(d-2)
    let mut base = a as u32 % d;
    let mut e = d - 2;
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % d;
        }
        base = base * base % d;
        e >>= 1;
    }
    acc as u8
}

pub(crate) fn dot(a: &[u8], b: &[u8], d: u32) -> u8 {
    let s: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
    (s % d as u64) as u8
}

/// `row <- row - c * other`
fn axpy(row: &mut [u8], c: u8, other: &[u8], d: u32) {
    if c == 0 {
        return;
    }
    for (r, &o) in row.iter_mut().zip(other) {
        *r = sub(*r, mul(c, o, d), d);
    }
}

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot column of each remaining row, in increasing order.
pub(crate) fn rref(rows: &mut Vec<Vec<u8>>, ncols: usize, d: u32) -> Vec<usize> {
    rref_limited(rows, ncols, ncols, d)
}

/// Like [`rref`], but only columns `< pivot_limit` may hold pivots. Used for
/// augmented systems.
pub(crate) fn rref_limited(
    rows: &mut Vec<Vec<u8>>,
    ncols: usize,
    pivot_limit: usize,
    d: u32,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_limit.min(ncols) {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let s = inv(rows[r][c], d);
        for x in rows[r].iter_mut() {
            *x = mul(*x, s, d);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r {
                let c0 = row[c];
                axpy(row, c0, &pivot_row, d);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    // rows beyond r are zero in the pivot region
    if pivot_limit >= ncols {
        rows.truncate(r);
    }
    pivots
}

pub(crate) fn rank(rows: &[Vec<u8>], ncols: usize, d: u32) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols, d).len()
}

/// Basis of `{x : row . x = 0 for every row}`, in canonical order: one vector
/// per free column, increasing.
pub(crate) fn nullspace(rows: &[Vec<u8>], ncols: usize, d: u32) -> Vec<Vec<u8>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols, d);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u8; ncols];
        v[f] = 1;
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = neg(row[f], d);
        }
        basis.push(v);
    }
    basis
}

/// Solves `A x = b` where `A` is given as equations (rows of length `ncols`).
/// Free variables are set to zero, so the returned particular solution is
/// deterministic. `None` if inconsistent.
pub(crate) fn solve(eqs: &[Vec<u8>], rhs: &[u8], ncols: usize, d: u32) -> Option<Vec<u8>> {
    debug_assert_eq!(eqs.len(), rhs.len());
    let mut aug: Vec<Vec<u8>> = eqs
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    let pivots = rref_limited(&mut aug, ncols + 1, ncols, d);
    // inconsistent if a row with no pivot has a nonzero rhs
    if aug[pivots.len()..].iter().any(|row| row[ncols] != 0) {
        return None;
    }
    let mut x = vec![0u8; ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[ncols];
    }
    Some(x)
}

/// Coefficients `c` with `sum_i c_i basis_i = v`, assuming `basis` is linearly
/// independent. `None` if `v` is outside the span.
pub(crate) fn coordinates(basis: &[Vec<u8>], v: &[u8], d: u32) -> Option<Vec<u8>> {
    let k = basis.len();
    let ncols = v.len();
    // equations: for each coordinate j, sum_i c_i basis_i[j] = v[j]
    let eqs: Vec<Vec<u8>> = (0..ncols)
        .map(|j| basis.iter().map(|b| b[j]).collect())
        .collect();
    solve(&eqs, v, k, d)
}
