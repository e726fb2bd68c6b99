//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use stabkit::combinatorics::{kappa, lagrangian_count, transversal_count, welch_bound};
use stabkit::potential::{
    frame_potential_bruteforce, frame_potential_combinatorial, frame_potential_fixed_state,
    frame_potential_recursion,
};
use stabkit::stabilizer::{eigen_residual, enumerate_states, overlap_exact, state_vector};
use stabkit::symplectic::{enumerate_lagrangians, is_transverse, Subspace};
use stabkit::weyl::{verify_commutation, verify_composition, verify_trace};
use stabkit::{Caps, ExactRational, PhaseVector, Prime};

const BRUTEFORCE_TOL: f64 = 1e-9;
const HILBERT_TOL: f64 = 1e-10;
const FIXED_STATE_TOL: f64 = 1e-9;

fn p(d: u64) -> Prime {
    Prime::new(d).unwrap()
}

fn criterion_1() -> Result<String, String> {
    let mut cells = 0;
    for d in [2, 3, 5, 7] {
        for n in 1..=5 {
            for t in 1..=8 {
                let a = frame_potential_recursion(p(d), n, t).map_err(|e| e.to_string())?;
                let b = frame_potential_combinatorial(p(d), n, t).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("d={d} n={n} t={t}: {a} vs {b}"));
                }
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} cells agree exactly"))
}

fn criterion_2() -> Result<String, String> {
    let mut worst = 0.0f64;
    for t in 1..=6u32 {
        let expected = (ExactRational::power(2, 2 - t as i64) + ExactRational::one())
            / ExactRational::from_integer(6);
        let got =
            frame_potential_bruteforce(p(2), 1, t, &Caps::default()).map_err(|e| e.to_string())?;
        let err = (got - expected.to_f64()).abs();
        worst = worst.max(err);
        if err > BRUTEFORCE_TOL {
            return Err(format!("t={t}: {got} vs {expected}"));
        }
    }
    Ok(format!(
        "t=1..6, max error {worst:.1e} <= {BRUTEFORCE_TOL:e}"
    ))
}

fn criterion_3() -> Result<String, String> {
    let f = |d: u64, n: usize, t: u32| frame_potential_combinatorial(p(d), n, t).unwrap();
    let w = |d: u64, n: usize, t: u32| welch_bound(BigInt::from(d).pow(n as u32), t);
    for d in [2, 3, 5] {
        for n in 1..=4 {
            if f(d, n, 2) != w(d, n, 2) {
                return Err(format!("F_2 != W_2 at d={d} n={n}"));
            }
        }
    }
    for n in 1..=4 {
        if f(2, n, 3) != w(2, n, 3) {
            return Err(format!("F_3 != W_3 at d=2 n={n}"));
        }
        if f(2, n, 4) <= w(2, n, 4) {
            return Err(format!("F_4 not above W_4 at d=2 n={n}"));
        }
    }
    for d in [3, 5] {
        for n in 1..=3 {
            if f(d, n, 3) <= w(d, n, 3) {
                return Err(format!("F_3 not above W_3 at d={d} n={n}"));
            }
        }
    }
    Ok("F_2 = W_2; F_3 = W_3 iff d = 2; F_4 > W_4".into())
}

fn criterion_4() -> Result<String, String> {
    for (d, n) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)] {
        let lags: Vec<_> = enumerate_lagrangians(p(d), n, 1 << 24).unwrap().collect();
        if BigInt::from(lags.len()) != lagrangian_count(p(d), n as u32) {
            return Err(format!("Lagrangian total at d={d} n={n}: {}", lags.len()));
        }
        let m = &lags[0];
        let mut spectrum = vec![0u64; n + 1];
        let mut transverse = 0u64;
        for nn in &lags {
            spectrum[m.intersection_dim(nn).unwrap()] += 1;
            transverse += u64::from(is_transverse(m, nn).unwrap());
        }
        for (k, &count) in spectrum.iter().enumerate() {
            if BigInt::from(count) != kappa(p(d), n as u32, k as u32).unwrap() {
                return Err(format!("spectrum at d={d} n={n} k={k}: {count}"));
            }
        }
        if BigInt::from(transverse) != transversal_count(p(d), n as u32) {
            return Err(format!("transverse count at d={d} n={n}: {transverse}"));
        }
    }
    Ok("totals, spectra and transverse counts at 6 (d, n)".into())
}

fn criterion_5() -> Result<String, String> {
    let mut pairs = 0usize;
    for (d, n) in [(2, 1), (2, 2), (3, 1)] {
        let caps = Caps::default();
        let states: Vec<_> = enumerate_states(p(d), n, &caps).unwrap().collect();
        let vs: Vec<_> = states
            .iter()
            .map(|s| state_vector(s, caps.matrix).unwrap())
            .collect();
        for (s, v) in states.iter().zip(&vs) {
            let r = eigen_residual(s, v);
            if r > HILBERT_TOL {
                return Err(format!("eigenvalue residual {r:e} at {s:?}"));
            }
        }
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let exact = overlap_exact(a, b).unwrap().to_f64();
                let numeric = vs[i].inner(&vs[j]).norm_sqr();
                if (exact - numeric).abs() > HILBERT_TOL {
                    return Err(format!(
                        "overlap at d={d} n={n} ({i},{j}): {exact} vs {numeric}"
                    ));
                }
                pairs += 1;
            }
        }
        let dim = (d as usize).pow(n as u32);
        for block in vs.chunks(dim) {
            for (i, a) in block.iter().enumerate() {
                for (j, b) in block.iter().enumerate() {
                    let target = Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0);
                    if (a.inner(b) - target).norm() > HILBERT_TOL {
                        return Err(format!("Gram entry ({i},{j}) at d={d} n={n}"));
                    }
                }
            }
        }
    }
    Ok(format!(
        "{pairs} overlaps, eigen equations and Gram matrices within {HILBERT_TOL:e}"
    ))
}

fn criterion_6() -> Result<String, String> {
    let mut worst = 0.0f64;
    for t in [2, 3, 4] {
        let exact = frame_potential_recursion(p(2), 3, t).unwrap().to_f64();
        let got =
            frame_potential_fixed_state(p(2), 3, t, &Caps::default()).map_err(|e| e.to_string())?;
        let err = (got - exact).abs();
        worst = worst.max(err);
        if err > FIXED_STATE_TOL {
            return Err(format!("t={t}: {got} vs {exact}"));
        }
    }
    Ok(format!(
        "1080 states, t=2,3,4, max error {worst:.1e} <= {FIXED_STATE_TOL:e}"
    ))
}

fn criterion_7() -> Result<String, String> {
    let mut pairs = 0usize;
    for (d, n) in [(2, 1), (2, 2), (3, 1)] {
        let points: Vec<PhaseVector> = Subspace::full(p(d), 2 * n)
            .elements()
            .iter()
            .map(|c| {
                PhaseVector::new(p(d), n, &c.iter().map(|&x| x as i64).collect::<Vec<_>>()).unwrap()
            })
            .collect();
        for u in &points {
            if !verify_trace(u, 4096).unwrap() {
                return Err(format!("trace identity fails at {u:?}"));
            }
            for v in &points {
                if !verify_composition(u, v, 4096).unwrap() {
                    return Err(format!("composition fails at {u:?}, {v:?}"));
                }
                if !verify_commutation(u, v, 4096).unwrap() {
                    return Err(format!("commutation fails at {u:?}, {v:?}"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs within 1e-12"))
}

fn criterion_8() -> Result<String, String> {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_stabkit"))
            .args([
                "verify",
                "--d",
                "2",
                "--n",
                "2",
                "--t-max",
                "4",
                "--threads",
                threads,
            ])
            .env_remove("STABKIT_THREADS")
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run("1")?;
    let b = run("8")?;
    if !a.status.success() || !b.status.success() {
        return Err(format!(
            "exit codes {:?} and {:?}",
            a.status.code(),
            b.status.code()
        ));
    }
    if a.stdout != b.stdout {
        return Err("outputs differ".into());
    }
    Ok(format!("{} identical bytes", a.stdout.len()))
}

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("exact engine agreement", criterion_1),
        ("single-qubit base case by brute force", criterion_2),
        ("design orders by exact comparison", criterion_3),
        ("counting oracles", criterion_4),
        ("Hilbert-space oracles", criterion_5),
        ("fixed-state potential at d=2 n=3", criterion_6),
        ("Weyl algebra", criterion_7),
        ("determinism across thread counts", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail} [{ms} ms]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{ms} ms]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
