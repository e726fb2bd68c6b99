//! Counts subspaces by brute-force span closure, with no row reduction, and
//! compares against the closed forms and the library enumerators.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use stabkit::combinatorics::{gaussian_binomial, kappa, lagrangian_count, transversal_count};
use stabkit::symplectic::{enumerate_lagrangians, enumerate_subspaces, intersection_spectrum};
use stabkit::Prime;

type Set = BTreeSet<Vec<u32>>;

fn all_vectors(d: u32, m: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..d).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn closure(gens: &[&Vec<u32>], d: u32, m: usize) -> Set {
    let mut set: Set = [vec![0; m]].into_iter().collect();
    for g in gens {
        let mut next = Set::new();
        for v in &set {
            for c in 0..d {
                next.insert(
                    v.iter()
                        .zip(g.iter())
                        .map(|(a, b)| (a + c * b) % d)
                        .collect(),
                );
            }
        }
        set = next;
    }
    set
}

/// Every subspace of `Z_d^m` of size `d^k`, as a set of elements.
fn subspaces(d: u32, m: usize, k: usize) -> BTreeSet<Set> {
    let vs = all_vectors(d, m);
    let target = (d as usize).pow(k as u32);
    let mut found = BTreeSet::new();
    let mut idx = vec![0usize; k];
    loop {
        let gens: Vec<&Vec<u32>> = idx.iter().map(|&i| &vs[i]).collect();
        let s = closure(&gens, d, m);
        if s.len() == target {
            found.insert(s);
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return found;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < vs.len() {
                break;
            }
            idx[pos] = 0;
        }
        if k == 0 {
            return found;
        }
    }
}

fn form(u: &[u32], v: &[u32], d: u32) -> u32 {
    let n = u.len() / 2;
    let mut s = 0i64;
    for i in 0..n {
        s += u[i] as i64 * v[n + i] as i64 - u[n + i] as i64 * v[i] as i64;
    }
    s.rem_euclid(d as i64) as u32
}

fn lagrangians(d: u32, n: usize) -> Vec<Set> {
    subspaces(d, 2 * n, n)
        .into_iter()
        .filter(|s| s.iter().all(|u| s.iter().all(|v| form(u, v, d) == 0)))
        .collect()
}

fn log_d(size: usize, d: u32) -> usize {
    let mut k = 0;
    let mut s = size;
    while s > 1 {
        s /= d as usize;
        k += 1;
    }
    k
}

#[test]
fn gaussian_binomials_count_subspaces() {
    for (d, max_m) in [(2u32, 4usize), (3, 3), (5, 2)] {
        let p = Prime::new(d as u64).unwrap();
        for m in 0..=max_m {
            for k in 0..=m {
                let brute = subspaces(d, m, k).len();
                assert_eq!(
                    BigInt::from(brute),
                    gaussian_binomial(m as u32, k as u32, p),
                    "d={d} m={m} k={k}"
                );
                let enumerated = enumerate_subspaces(p, m, k, 1 << 20).unwrap().count();
                assert_eq!(enumerated, brute);
            }
        }
    }
}

#[test]
fn lagrangian_totals_and_spectra() {
    for (d, n) in [(2u32, 1usize), (2, 2), (3, 1), (3, 2), (5, 1)] {
        let p = Prime::new(d as u64).unwrap();
        let brute = lagrangians(d, n);
        assert_eq!(BigInt::from(brute.len()), lagrangian_count(p, n as u32));
        assert_eq!(
            enumerate_lagrangians(p, n, 1 << 20).unwrap().count(),
            brute.len()
        );

        // every Lagrangian sees the same spectrum
        for m in &brute {
            let mut spectrum: BTreeMap<usize, u64> = BTreeMap::new();
            for nn in &brute {
                let k = log_d(m.intersection(nn).count(), d);
                *spectrum.entry(k).or_default() += 1;
            }
            for k in 0..=n {
                let count = spectrum.get(&k).copied().unwrap_or(0);
                assert_eq!(BigInt::from(count), kappa(p, n as u32, k as u32).unwrap());
            }
            assert_eq!(BigInt::from(spectrum[&0]), transversal_count(p, n as u32));
        }

        let first = enumerate_lagrangians(p, n, 1 << 20)
            .unwrap()
            .next()
            .unwrap();
        let lib = intersection_spectrum(&first, 1 << 20).unwrap();
        for (k, count) in lib {
            assert_eq!(BigInt::from(count), kappa(p, n as u32, k as u32).unwrap());
        }
    }
}
