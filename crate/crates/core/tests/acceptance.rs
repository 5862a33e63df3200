//! Acceptance run. Each criterion prints a single `PASS`/`FAIL` line; the
//! process exits non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use mflab_core::arith::{binomial, half_binomial};
use mflab_core::lifts::lift_precision_bound;
use mflab_core::spanning::{default_rank_columns, SweepOptions};
use mflab_core::*;
use num_bigint::BigInt;
use num_traits::One;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
use rand_like::Lcg;

/// Every valid spec with `ℓ ≤ 20` for the discriminants of criterion 1.
fn criterion1_specs() -> Vec<GeneratorSpec> {
    let mut specs = Vec::new();
    for d in [1i64, 5, 13, 17] {
        for ell in (6..=20).step_by(2) {
            specs.extend(GeneratorSpec::all_with_ell(d, ell));
        }
    }
    for d in [-3i64, -7, -11, -15] {
        for ell in (7..=19).step_by(2) {
            specs.extend(GeneratorSpec::all_with_ell(d, ell));
        }
    }
    specs
}

fn criterion1() -> Outcome {
    let specs = criterion1_specs();
    let mut coefficients = 0u64;
    let mut nonvanishing = 0;
    for spec in &specs {
        let f = f_coefficients(spec, 50);
        let g = lifted_g_coefficients(spec, 50);
        let ratio = spec.lift_ratio();
        for n in 1..=50usize {
            if g[n - 1] != &ratio * &f[n - 1] {
                return Err(format!("{spec}: mismatch at n={n}"));
            }
        }
        coefficients += 50;
        if f.iter().any(|c| !c.is_zero()) {
            nonvanishing += 1;
        } else if dim_cusp_level1(2 * spec.ell() as u64).unwrap() > 0 {
            return Err(format!("{spec}: F vanishes although S_2ℓ(1) is nonzero"));
        }
        let report = verify_theorem1(spec, 50);
        if !report.verdict {
            return Err(format!("{spec}: verify_theorem1 reported {:?}", report.mismatches));
        }
    }
    Ok(format!(
        "{} specs ({nonvanishing} with F ≠ 0), {coefficients} coefficients, zero mismatches",
        specs.len()
    ))
}

fn criterion2() -> Outcome {
    let specs = [
        (1, 4, 1),
        (1, 6, 1),
        (1, 4, 2),
        (5, 4, 1),
        (5, 6, 1),
        (-3, 7, 1),
        (-3, 9, 1),
        (-3, 5, 2),
        (-7, 7, 1),
        (-15, 5, 2),
    ];
    for &(d, k, e) in &specs {
        let spec = GeneratorSpec::new(d, k, e).map_err(|e| e.to_string())?;
        let closed = f_coefficients(&spec, 100);
        let series = f_generator_series(&spec, 101).map_err(|e| e.to_string())?;
        if series.is_zero() {
            return Err(format!("{spec}: F vanishes, the comparison would be vacuous"));
        }
        for n in 1..=100 {
            if series.coeffs()[n] != closed[n - 1] {
                return Err(format!("{spec}: f({n}) routes differ"));
            }
        }
        let disc = spec.discriminant();
        let g = g_generator_series(&spec, lift_precision_bound(disc, 31) + 1).map_err(|e| e.to_string())?;
        let lifted = shimura_lift(&g, disc, spec.ell(), 31).map_err(|e| e.to_string())?;
        let closed = lifted_g_coefficients(&spec, 30);
        for n in 1..=30 {
            if lifted.coeffs()[n] != closed[n - 1] {
                return Err(format!("{spec}: g({n}) routes differ"));
            }
        }
    }
    Ok(format!("{} specs, f to n=100, g to n=30", specs.len()))
}

/// `τ(n)` for `n < len` from `q·Π(1−qⁿ)²⁴`, in plain integers.
fn tau_from_product(len: usize) -> Vec<i128> {
    let mut p = vec![0i128; len];
    p[0] = 1;
    for n in 1..len {
        for _ in 0..24 {
            for i in (n..len).rev() {
                p[i] -= p[i - n];
            }
        }
    }
    let mut tau = vec![0i128; len];
    tau[1..].copy_from_slice(&p[..len - 1]);
    tau
}

fn criterion3() -> Outcome {
    let tau = tau_from_product(51);
    let known = [1i128, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920];
    if tau[1..=10] != known {
        return Err("product expansion disagrees with tabulated τ".into());
    }
    let spec = GeneratorSpec::new(1, 4, 1).unwrap();
    let closed = f_coefficients(&spec, 50);
    let series = f_generator_series(&spec, 51).map_err(|e| e.to_string())?;
    let a1 = closed[0].clone();
    if a1 != Rational::new(1, 12) {
        return Err(format!("a(1) = {a1}"));
    }
    for n in 1..=50 {
        let t = Rational::from(BigInt::from(tau[n]));
        if &closed[n - 1] / &a1 != t || &series.coeffs()[n] / &a1 != t {
            return Err(format!("a({n})/a(1) != τ({n})"));
        }
    }
    Ok(format!("a(1) = {a1}, τ(n) matched for n ≤ 50"))
}

fn criterion4() -> Outcome {
    let mut lines = Vec::new();
    let mut check = |d: i64, ell_max: u32, source: EntrySource| -> std::result::Result<(), String> {
        let t0 = Instant::now();
        let mut slowest = (0u32, 0u64);
        let mut count = 0;
        let opts = SweepOptions { source, timing: true };
        conjecture_sweep(d, 6, ell_max, &opts, |r| {
            if !r.nonzero {
                return Err(Error::InvalidArgument(format!(
                    "D={d} ℓ={}: determinant {:?} ({:?})",
                    r.ell, r.det, r.error
                )));
            }
            let ms = r.ms.unwrap_or(0);
            if ms >= slowest.1 {
                slowest = (r.ell, ms);
            }
            count += 1;
            Ok(())
        })
        .map_err(|e| e.to_string())?;
        if source == EntrySource::Lifted {
            lines.push(format!(
                "D={d}: {count} ℓ in {:.1}s (slowest ℓ={} {}ms)",
                t0.elapsed().as_secs_f64(),
                slowest.0,
                slowest.1
            ));
        }
        Ok(())
    };
    check(1, 120, EntrySource::Lifted)?;
    for d in [5, 13, 17, 29, 37, 41] {
        check(d, 60, EntrySource::Lifted)?;
    }
    // Same sweep with the half-integral coefficients as entries.
    for d in [1, 5, 13] {
        check(d, 60, EntrySource::HalfIntegral)?;
    }
    Ok(lines.join("; "))
}

fn criterion5() -> Outcome {
    let mut n = 0;
    for ell in (6..=60u32).step_by(2) {
        let check = f_rank_check(1, ell, default_rank_columns(ell).unwrap()).map_err(|e| e.to_string())?;
        let expected = dim_cusp_level1(2 * ell as u64).unwrap();
        if !check.equal || check.rank as u64 != expected {
            return Err(format!("ℓ={ell}: {check:?}"));
        }
        if expected != (2 * ell as u64) / 12 {
            return Err(format!("ℓ={ell}: dim {expected} != ⌊2ℓ/12⌋"));
        }
        n += 1;
    }
    Ok(format!("{n} even ℓ in 6..=60, rank = dim S_2ℓ(1)"))
}

fn criterion6() -> Outcome {
    let specs = criterion1_specs();
    for spec in &specs {
        let g = g_generator_series(spec, 200).map_err(|e| e.to_string())?;
        let bad = g.plus_space_violations(spec.ell() as u64).map_err(|e| e.to_string())?;
        if !bad.is_empty() {
            return Err(format!("{spec}: plus-space violated at {bad:?}"));
        }
        let f = f_generator_series(spec, 2).map_err(|e| e.to_string())?;
        if !g.coeffs()[0].is_zero() || !f.coeffs()[0].is_zero() {
            return Err(format!("{spec}: nonzero constant term"));
        }
    }
    Ok(format!("{} specs at precision 200", specs.len()))
}

fn criterion7() -> Outcome {
    let mut binomial_cases = 0;
    for k in 4..=12u32 {
        for e in 1..=8u32 {
            for r in 0..=e {
                if !check_lemma22(k, e, r) {
                    return Err(format!("binomial identity fails at k={k} e={e} R={r}"));
                }
                binomial_cases += 1;
            }
        }
    }
    // C(k+e−1,e)·C_e(a₁,a₂) = C(k+2e−1,2e)·Σ_{r+s=e} (−1)^r C(k+e−1,s) C(e−½,r) 4^r (a₂−a₁)^{2s} (a₁a₂)^r
    let mut bridged = 0;
    for k in [4u32, 6] {
        for e in 1..=3u32 {
            let (ki, ei) = (k as i64, e as i64);
            for a1 in 0..=20u64 {
                for a2 in 0..=20 - a1 {
                    let lhs = Rational::from(binomial(ki + ei - 1, e as u64)) * c_polynomial(k, e, a1, a2);
                    let diff = BigInt::from(a2 as i64 - a1 as i64);
                    let prod = BigInt::from(a1 * a2);
                    let sum: Rational = (0..=e)
                        .map(|r| {
                            let s = e - r;
                            let sign = if r % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                            Rational::from(
                                sign * binomial(ki + ei - 1, s as u64)
                                    * BigInt::from(4).pow(r)
                                    * diff.pow(2 * s)
                                    * prod.pow(r),
                            ) * half_binomial(e as u64, r as u64)
                        })
                        .sum();
                    let rhs = Rational::from(binomial(ki + 2 * ei - 1, 2 * e as u64)) * sum;
                    if lhs != rhs {
                        return Err(format!("bridging identity fails at k={k} e={e} ({a1},{a2})"));
                    }
                    let scaled = Rational::from(binomial(ki + 2 * ei - 1, 2 * e as u64)) * e_polynomial(k, e, a1, a2);
                    if scaled != lhs {
                        return Err(format!("E kernel disagrees at k={k} e={e} ({a1},{a2})"));
                    }
                    bridged += 1;
                }
            }
        }
    }
    Ok(format!("binomial identity: {binomial_cases} cases; bridging identity: {bridged} cases"))
}

/// Cofactor expansion.
fn det_oracle(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0] as i128;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] as i128 * det_oracle(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Largest size of a nonvanishing minor.
fn rank_oracle(m: &[Vec<i64>]) -> usize {
    let (r, c) = (m.len(), m[0].len());
    for size in (1..=r.min(c)).rev() {
        for rows in subsets(r, size) {
            for cols in subsets(c, size) {
                let minor: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
                if det_oracle(&minor) != 0 {
                    return size;
                }
            }
        }
    }
    0
}

fn check_matrix(m: &[Vec<i64>]) -> std::result::Result<(), String> {
    let refs: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
    let mat = RationalMatrix::from_integers(&refs).map_err(|e| e.to_string())?;
    if rank(&mat) != rank_oracle(m) {
        return Err(format!("rank of {m:?}"));
    }
    if m.len() == m[0].len() {
        let det = determinant(&mat).map_err(|e| e.to_string())?;
        if det != Rational::from(BigInt::from(det_oracle(m))) {
            return Err(format!("determinant of {m:?}"));
        }
    }
    Ok(())
}

fn structural() -> Outcome {
    // Hecke relation for σ.
    for d in [1i64, 5, -3, -15] {
        let chi = OddFundamentalDiscriminant::new(d).unwrap();
        for fac in chi.factorizations() {
            for k in [4u32, 5] {
                let s = TwistedSigma::new(k, fac).unwrap();
                let table = s.table(1601);
                for a1 in 1..=40u64 {
                    for a2 in 1..=40u64 {
                        let g = num_integer::gcd(a1, a2);
                        let rhs: Rational = (1..=g)
                            .filter(|x| g % x == 0)
                            .map(|x| {
                                Rational::from(BigInt::from(chi.chi(x as i64)) * BigInt::from(x).pow(k - 1))
                                    * &table[(a1 * a2 / (x * x)) as usize]
                            })
                            .sum();
                        if &table[a1 as usize] * &table[a2 as usize] != rhs {
                            return Err(format!("Hecke relation D={d} {fac:?} k={k} ({a1},{a2})"));
                        }
                    }
                }
            }
        }
    }
    // U₂ identity and U∘dilate on Eisenstein series.
    for k in [4u32, 6] {
        for d in [1i64, 5, -3] {
            let disc = OddFundamentalDiscriminant::new(d).unwrap();
            let g = eisenstein_gkd(k, disc, 200).map_err(|e| e.to_string())?;
            let c = Rational::from(BigInt::from(disc.chi(2)) * BigInt::from(2).pow(k - 1));
            let lhs = g.u_operator(2).truncate(100);
            let rhs = g
                .scale(&(Rational::one() + &c))
                .sub(&g.dilate(2).scale(&c))
                .unwrap()
                .truncate(100);
            if lhs != rhs {
                return Err(format!("U₂ identity k={k} D={d}"));
            }
            for m in 1..=6 {
                if g.dilate(m).u_operator(m) != g {
                    return Err(format!("U∘dilate k={k} D={d} m={m}"));
                }
            }
        }
    }
    // [f,f]_e = 0 for odd e.
    let t = theta(60);
    let e4 = eisenstein_g(4, 1, 1, 60).unwrap();
    let g5 = eisenstein_gkd(5, OddFundamentalDiscriminant::new(-3).unwrap(), 60).unwrap();
    for f in [&t, &e4, &g5] {
        let w = HalfWeight::of(f).unwrap();
        for e in [1u32, 3, 5] {
            if !rankin_cohen(f, w, f, w, e).map_err(|e| e.to_string())?.is_zero() {
                return Err(format!("odd self-bracket e={e} nonzero"));
            }
        }
    }
    // Determinant and rank against oracles.
    let mut exhaustive = 0u64;
    for (r, c) in [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (1, 4), (4, 1), (1, 5), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4), (4, 2), (3, 3)] {
        let cells = r * c;
        let total = 5u64.pow(cells as u32);
        for code in 0..total {
            let mut x = code;
            let m: Vec<Vec<i64>> = (0..r)
                .map(|_| {
                    (0..c)
                        .map(|_| {
                            let v = (x % 5) as i64 - 2;
                            x /= 5;
                            v
                        })
                        .collect()
                })
                .collect();
            check_matrix(&m)?;
            exhaustive += 1;
        }
    }
    let mut rng = Lcg::new(0x5eed);
    let mut sampled = 0u64;
    for (r, c) in [(2, 5), (5, 2), (3, 4), (4, 3), (3, 5), (5, 3), (4, 4), (4, 5), (5, 4), (5, 5)] {
        for trial in 0..4000 {
            let mut m: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.below(5) as i64 - 2).collect()).collect();
            // Force rank deficiency in a quarter of the samples.
            if trial % 4 == 0 && r > 1 {
                let (a, b) = (rng.below(r as u64) as usize, rng.below(r as u64) as usize);
                let s = rng.below(3) as i64 - 1;
                let src = m[a].clone();
                for (j, v) in src.iter().enumerate() {
                    if a != b {
                        m[b][j] = (s * v).clamp(-2, 2);
                    }
                }
            }
            check_matrix(&m)?;
            sampled += 1;
        }
    }
    Ok(format!(
        "Hecke, U₂, U∘dilate, odd self-brackets; matrices: {exhaustive} exhaustive (≤ 9 entries), {sampled} sampled (10–25 entries)"
    ))
}

mod rand_like {
    /// Small deterministic generator for reproducible matrix samples.
    pub struct Lcg(u64);

    impl Lcg {
        pub fn new(seed: u64) -> Self {
            Lcg(seed)
        }

        pub fn below(&mut self, n: u64) -> u64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (self.0 >> 33) % n
        }
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 lift identity, ℓ ≤ 20, n ≤ 50", criterion1),
        ("2 two-path equivalence", criterion2),
        ("3 τ golden values", criterion3),
        ("4 conjecture determinants nonzero", criterion4),
        ("5 rank = dimension, D = 1", criterion5),
        ("6 plus space and cuspidality", criterion6),
        ("7 binomial identities", criterion7),
        ("8 structural properties", structural),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t0 = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} [{secs:.1}s]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} [{secs:.1}s]: {why}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
