//! The `D`-th Shimura lift, the generators `F_{D,k,e}` and `G_{D,k,e}`, and a
//! verifier for the lifting identity between them.
//!
//! Each generator is available by two independent routes: as a q-series
//! assembled from brackets of Eisenstein series (one term per factorization
//! `D = D₁D₂`), and as a closed-form coefficient sum over `a₁ + a₂ = n|D₂|`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    binomial, dirichlet_l_nonpositive, divisors_of, half_binomial, DiscriminantFactorization,
    OddFundamentalDiscriminant, PrimeSieve, Rational,
};
use crate::brackets::{rankin_cohen_then_u, CKernel, EKernel, HalfWeight};
use crate::eisenstein::{eisenstein_g, theta, SigmaCache, TwistedSigma};
use crate::error::{Error, Result};
use crate::qseries::QSeries;

/// A triple `(D, k, e)` naming one pair `F_{D,k,e}`, `G_{D,k,e}` with `ℓ = k + 2e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct GeneratorSpec {
    d: OddFundamentalDiscriminant,
    k: u32,
    e: u32,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    #[serde(rename = "D")]
    d: i64,
    k: u32,
    e: u32,
}

impl TryFrom<RawSpec> for GeneratorSpec {
    type Error = Error;
    fn try_from(r: RawSpec) -> Result<Self> {
        GeneratorSpec::new(r.d, r.k, r.e)
    }
}

impl From<GeneratorSpec> for RawSpec {
    fn from(s: GeneratorSpec) -> Self {
        RawSpec {
            d: s.d.value(),
            k: s.k,
            e: s.e,
        }
    }
}

impl GeneratorSpec {
    pub fn new(d: i64, k: u32, e: u32) -> Result<Self> {
        let disc = OddFundamentalDiscriminant::new(d)?;
        let err = |reason| Error::InvalidSpec {
            d,
            k: k as i64,
            e: e as i64,
            reason,
        };
        if k < 4 {
            return Err(err("k must be at least 4"));
        }
        if e < 1 {
            return Err(err("e must be at least 1"));
        }
        let ell = k + 2 * e;
        if ell.is_multiple_of(2) != (d > 0) {
            return Err(err("need (-1)^(k+2e)·D > 0"));
        }
        Ok(GeneratorSpec { d: disc, k, e })
    }

    pub fn discriminant(&self) -> OddFundamentalDiscriminant {
        self.d
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn ell(&self) -> u32 {
        self.k + 2 * self.e
    }

    /// `|D|^e · C(k+e−1, e) / C(k+2e−1, 2e)`.
    pub fn lift_ratio(&self) -> Rational {
        let (k, e) = (self.k as i64, self.e as u64);
        Rational::from(BigInt::from(self.d.abs()).pow(self.e))
            * Rational::new(binomial(k + e as i64 - 1, e), binomial(k + 2 * e as i64 - 1, 2 * e))
    }

    /// Every valid spec of the given weight parameter `ℓ`, ordered by `e`.
    pub fn all_with_ell(d: i64, ell: u32) -> Vec<GeneratorSpec> {
        (1..=ell.saturating_sub(4) / 2)
            .filter_map(|e| GeneratorSpec::new(d, ell - 2 * e, e).ok())
            .collect()
    }
}

impl std::fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(D={}, k={}, e={})", self.d, self.k, self.e)
    }
}

/// Minimal input precision for lifting to `out_prec` coefficients: the input
/// must know strictly more than this many.
pub fn lift_precision_bound(d: OddFundamentalDiscriminant, out_prec: usize) -> usize {
    d.abs() as usize * (out_prec - 1).pow(2)
}

/// `S_D(g) = c(0)/2·L_D(1−ℓ) + Σ_{n≥1} (Σ_{d|n} χ_D(d) d^{ℓ−1} c(|D|n²/d²)) q^n`.
pub fn shimura_lift(
    g: &QSeries,
    d: OddFundamentalDiscriminant,
    ell: u32,
    out_prec: usize,
) -> Result<QSeries> {
    if out_prec == 0 {
        return Err(Error::InvalidArgument("output precision must be positive".into()));
    }
    let violations = g.plus_space_violations(ell as u64)?;
    if !violations.is_empty() {
        return Err(Error::PlusSpaceViolation(violations));
    }
    let required = lift_precision_bound(d, out_prec);
    if g.prec() <= required {
        return Err(Error::InsufficientPrecision {
            required,
            available: g.prec(),
        });
    }
    let abs_d = d.abs() as usize;
    let constant =
        g.coeffs()[0].clone() / Rational::from(2) * dirichlet_l_nonpositive(d, 1 - ell as i64)?;
    let rest: Vec<Rational> = (1..out_prec)
        .into_par_iter()
        .map(|n| {
            divisors_upto(n)
                .into_iter()
                .filter_map(|dd| {
                    let chi = d.chi(dd as i64);
                    let c = &g.coeffs()[abs_d * (n / dd) * (n / dd)];
                    (chi != 0 && !c.is_zero()).then(|| {
                        let t = c * Rational::from(BigInt::from(dd).pow(ell - 1));
                        if chi > 0 {
                            t
                        } else {
                            -t
                        }
                    })
                })
                .sum()
        })
        .collect();
    let mut coeffs = Vec::with_capacity(out_prec);
    coeffs.push(constant);
    coeffs.extend(rest);
    QSeries::new(4 * ell as i64, coeffs)
}

fn divisors_upto(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn inner_prec(fac: DiscriminantFactorization, prec: usize) -> usize {
    fac.d2_abs() as usize * (prec - 1) + 1
}

/// `χ_{D₂}(−1)·|D₂|^{−2e}` and `χ_{D₂}(−|D₁|)·|D₂|^{−e}`.
fn f_prefactor(fac: DiscriminantFactorization, e: u32) -> Rational {
    let chi = crate::arith::kronecker_symbol(fac.d2, -1);
    Rational::new(chi, BigInt::from(fac.d2_abs()).pow(2 * e))
}

fn g_prefactor(fac: DiscriminantFactorization, e: u32) -> Rational {
    let chi = crate::arith::kronecker_symbol(fac.d2, -(fac.d1_abs() as i64));
    Rational::new(chi, BigInt::from(fac.d2_abs()).pow(e))
}

/// `F_{D,k,e} = Σ_{D=D₁D₂} χ_{D₂}(−1) |D₂|^{−2e} U_{|D₂|}([G_{k,D₁,D₂}, G_{k,D₁,D₂}]_{2e})`.
pub fn f_generator_series(spec: &GeneratorSpec, prec: usize) -> Result<QSeries> {
    if prec == 0 {
        return Err(Error::InvalidArgument("precision must be positive".into()));
    }
    let (k, e) = (spec.k, spec.e);
    let weight = HalfWeight::integral(k as i64)?;
    let terms: Vec<QSeries> = spec
        .d
        .factorizations()
        .into_par_iter()
        .map(|fac| {
            let g = eisenstein_g(k, fac.d1, fac.d2, inner_prec(fac, prec))?;
            let bracket = rankin_cohen_then_u(&g, weight, &g, weight, 2 * e, fac.d2_abs() as usize)?;
            Ok(bracket.scale(&f_prefactor(fac, e)))
        })
        .collect::<Result<_>>()?;
    sum_series(4 * spec.ell() as i64, prec, terms)
}

/// `G_{D,k,e} = Σ_{D=D₁D₂} χ_{D₂}(−|D₁|) |D₂|^{−e} U_{|D₂|}([G_{k,D₁,D₂}(4z), θ(|D₁|z)]_e)`,
/// a form of weight `ℓ + ½` in the plus space.
pub fn g_generator_series(spec: &GeneratorSpec, prec: usize) -> Result<QSeries> {
    if prec == 0 {
        return Err(Error::InvalidArgument("precision must be positive".into()));
    }
    let (k, e) = (spec.k, spec.e);
    let a = HalfWeight::integral(k as i64)?;
    let b = HalfWeight::from_twice(1)?;
    let terms: Vec<QSeries> = spec
        .d
        .factorizations()
        .into_par_iter()
        .map(|fac| {
            let p = inner_prec(fac, prec);
            let g4 = eisenstein_g(k, fac.d1, fac.d2, (p - 1).div_ceil(4) + 1)?
                .dilate(4)
                .truncate(p);
            let m = fac.d1_abs() as usize;
            let th = theta((p - 1).div_ceil(m) + 1).dilate(m).truncate(p);
            let bracket = rankin_cohen_then_u(&g4, a, &th, b, e, fac.d2_abs() as usize)?;
            Ok(bracket.scale(&g_prefactor(fac, e)))
        })
        .collect::<Result<_>>()?;
    sum_series(2 * spec.ell() as i64 + 1, prec, terms)
}

fn sum_series(weight_times_two: i64, prec: usize, terms: Vec<QSeries>) -> Result<QSeries> {
    terms
        .iter()
        .try_fold(QSeries::zero(weight_times_two, prec), |acc, t| acc.add(t))
}

/// Shared machinery for the closed-form coefficient sums
/// `Σ_{D=D₁D₂} χ_{D₂}(−1)|D₂|^{−2e} Σ_{a₁+a₂=n|D₂|} Σ_{d|(a₁,a₂)} χ_D(d) d^{k−1} σ(a₁a₂/d²) K(a₁,a₂)`
/// with `gcd(0, m) = m`.
struct ClosedForm {
    spec: GeneratorSpec,
    sigmas: Vec<TwistedSigma>,
    sieve: PrimeSieve,
}

enum Kernel<'a> {
    C(&'a CKernel),
    E(&'a EKernel),
}

impl Kernel<'_> {
    fn eval_scaled(&self, a1: u64, a2: u64) -> BigInt {
        match self {
            Kernel::C(c) => c.eval(a1, a2),
            Kernel::E(e) => e.eval_scaled(a1, a2),
        }
    }

    fn denom(&self) -> BigInt {
        match self {
            Kernel::C(_) => BigInt::one(),
            Kernel::E(e) => e.denom().clone(),
        }
    }
}

impl ClosedForm {
    fn new(spec: GeneratorSpec, n_max: u64) -> Result<Self> {
        let sigmas = spec
            .d
            .factorizations()
            .into_iter()
            .map(|f| TwistedSigma::new(spec.k, f))
            .collect::<Result<_>>()?;
        let sieve = PrimeSieve::new((n_max * spec.d.abs()).max(2) as usize);
        Ok(ClosedForm {
            spec,
            sigmas,
            sieve,
        })
    }

    fn sum(&self, n: u64, kernel: &Kernel) -> Rational {
        assert!(n >= 1, "closed forms index cusp-form coefficients n >= 1");
        let d = self.spec.d;
        let k = self.spec.k;
        let mut total = Rational::zero();
        for sigma in &self.sigmas {
            let fac = sigma.factorization();
            let big_n = n * fac.d2_abs();
            let mut cache = SigmaCache::new(sigma);
            let mut interior = BigInt::zero();
            // The summand is symmetric in a₁ ↔ a₂.
            for a1 in 1..=big_n / 2 {
                let a2 = big_n - a1;
                let f1 = self.sieve.factor(a1);
                let f2 = self.sieve.factor(a2);
                let g = num_integer::gcd(a1, a2);
                let gf = self.sieve.factor(g);
                let merged = merge(&f1, &f2);
                let mut hecke = BigInt::zero();
                for dd in divisors_of(&gf) {
                    let chi = d.chi(dd as i64);
                    if chi == 0 {
                        continue;
                    }
                    let reduced = subtract_twice(&merged, &self.sieve.factor(dd));
                    let s = cache.eval(&reduced);
                    if s.is_zero() {
                        continue;
                    }
                    let t = s * BigInt::from(dd).pow(k - 1);
                    if chi > 0 {
                        hecke += t;
                    } else {
                        hecke -= t;
                    }
                }
                if hecke.is_zero() {
                    continue;
                }
                let term = hecke * kernel.eval_scaled(a1, a2);
                if 2 * a1 == big_n {
                    interior += term;
                } else {
                    interior += term * 2;
                }
            }
            let mut inner = Rational::from(interior);
            // Boundary pairs (0, N) and (N, 0): d runs over divisors of N, σ(0).
            if !sigma.constant().is_zero() {
                let divsum: BigInt = divisors_of(&self.sieve.factor(big_n))
                    .into_iter()
                    .map(|dd| BigInt::from(d.chi(dd as i64)) * BigInt::from(dd).pow(k - 1))
                    .sum();
                let boundary = kernel.eval_scaled(0, big_n) + kernel.eval_scaled(big_n, 0);
                inner += sigma.constant() * Rational::from(divsum * boundary);
            }
            total += inner * f_prefactor(fac, self.spec.e);
        }
        total / Rational::from(kernel.denom())
    }

    fn f(&self, n: u64, c: &CKernel) -> Rational {
        self.sum(n, &Kernel::C(c))
    }

    fn lifted_g(&self, n: u64, e: &EKernel) -> Rational {
        Rational::from(BigInt::from(self.spec.d.abs()).pow(self.spec.e)) * self.sum(n, &Kernel::E(e))
    }
}

fn merge(a: &[(u64, u32)], b: &[(u64, u32)]) -> Vec<(u64, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

fn subtract_twice(n: &[(u64, u32)], d: &[(u64, u32)]) -> Vec<(u64, u32)> {
    let mut out = n.to_vec();
    for &(p, e) in d {
        let slot = out.iter_mut().find(|(q, _)| *q == p).expect("d² divides a₁a₂");
        slot.1 -= 2 * e;
    }
    out
}

/// `f_{D,k,e}(n)`, the `n`-th coefficient of `F_{D,k,e}` by its closed form.
pub fn f_coefficient(spec: &GeneratorSpec, n: u64) -> Rational {
    let cf = ClosedForm::new(*spec, n).expect("valid spec");
    cf.f(n, &CKernel::new(spec.k, spec.e))
}

/// Coefficients `f_{D,k,e}(1..=n_max)`.
pub fn f_coefficients(spec: &GeneratorSpec, n_max: u64) -> Vec<Rational> {
    let cf = ClosedForm::new(*spec, n_max).expect("valid spec");
    let kernel = CKernel::new(spec.k, spec.e);
    (1..=n_max).into_par_iter().map(|n| cf.f(n, &kernel)).collect()
}

/// `g_{D,k,e}(n)`, the `n`-th coefficient of `S_D(G_{D,k,e})` by its closed form.
pub fn lifted_g_coefficient(spec: &GeneratorSpec, n: u64) -> Rational {
    let cf = ClosedForm::new(*spec, n).expect("valid spec");
    cf.lifted_g(n, &EKernel::new(spec.k, spec.e))
}

/// Coefficients `g_{D,k,e}(1..=n_max)` of the lifted generator.
pub fn lifted_g_coefficients(spec: &GeneratorSpec, n_max: u64) -> Vec<Rational> {
    lifted_g_coefficients_at(spec, &(1..=n_max).collect::<Vec<_>>())
}

/// Lifted-generator coefficients at arbitrary indices `n >= 1`.
pub fn lifted_g_coefficients_at(spec: &GeneratorSpec, indices: &[u64]) -> Vec<Rational> {
    let n_max = indices.iter().copied().max().unwrap_or(1);
    let cf = ClosedForm::new(*spec, n_max).expect("valid spec");
    let kernel = EKernel::new(spec.k, spec.e);
    indices.par_iter().map(|&n| cf.lifted_g(n, &kernel)).collect()
}

/// Coefficients of the half-integral weight generator `G_{D,k,e}` itself at
/// the given indices, by expanding the bracket of `G_{k,D₁,D₂}(4z)` against
/// `θ(|D₁|z)` termwise instead of multiplying series.
pub fn g_coefficients_at(spec: &GeneratorSpec, indices: &[u64]) -> Vec<Rational> {
    let (k, e) = (spec.k, spec.e);
    let n_max = indices.iter().copied().max().unwrap_or(1);
    let sieve = PrimeSieve::new((n_max * spec.d.abs() / 4).max(2) as usize);
    let sigmas: Vec<TwistedSigma> = spec
        .d
        .factorizations()
        .into_iter()
        .map(|f| TwistedSigma::new(k, f).expect("valid factorization"))
        .collect();
    // w_r = (−1)^r C(e+k−1, e−r) C(e−½, r)
    let raw: Vec<Rational> = (0..=e as u64)
        .map(|r| {
            let w = Rational::from(binomial(e as i64 + k as i64 - 1, e as u64 - r)) * half_binomial(e as u64, r);
            if r % 2 == 1 {
                -w
            } else {
                w
            }
        })
        .collect();
    indices
        .par_iter()
        .map(|&n| {
            let mut total = Rational::zero();
            for sigma in &sigmas {
                let fac = sigma.factorization();
                let big_n = n * fac.d2_abs();
                let d1 = fac.d1_abs();
                let mut acc = Rational::zero();
                let mut m = 0u64;
                while m * m * d1 <= big_n {
                    let y = m * m * d1;
                    let x = big_n - y;
                    if x.is_multiple_of(4) {
                        let s = if x == 0 {
                            sigma.constant().clone()
                        } else {
                            Rational::from(sigma.from_factors(&sieve.factor(x / 4)))
                        };
                        if !s.is_zero() {
                            let poly: Rational = raw
                                .iter()
                                .enumerate()
                                .map(|(r, w)| {
                                    w * Rational::from(
                                        num_traits::pow(BigInt::from(x), r)
                                            * num_traits::pow(BigInt::from(y), e as usize - r),
                                    )
                                })
                                .sum();
                            let mult = if m == 0 { 1 } else { 2 };
                            acc += s * poly * Rational::from(mult);
                        }
                    }
                    m += 1;
                }
                total += acc * g_prefactor(fac, e);
            }
            total
        })
        .collect()
}

/// Which comparison produced a mismatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// `g(n)` against `ratio · f(n)`, both by closed form.
    Identity,
    /// Closed-form `f(n)` against the series route for `F`.
    FSeries,
    /// Closed-form `g(n)` against the lift of the series route for `G`.
    GLift,
    /// Lift of the `G` series against `ratio` times the `F` series.
    SeriesIdentity,
    /// Plus-space or cuspidality failure of a series route.
    Structure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub index: u64,
    pub lhs: Rational,
    pub rhs: Rational,
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftReport {
    pub spec: GeneratorSpec,
    pub n_max: u64,
    pub compared_coefficients: u64,
    pub series_window: u64,
    pub ratio: Rational,
    pub verdict: bool,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone, Copy)]
#[derive(Default)]
pub struct VerifyOptions {
    /// Number of coefficients checked through the series routes; `None`
    /// picks the largest window with `|D|·w² <= SERIES_BUDGET`.
    pub series_window: Option<u64>,
}

/// Series routes need `|D|·w²` input coefficients; this caps the default window.
pub const SERIES_BUDGET: u64 = 2000;


pub fn default_series_window(d: OddFundamentalDiscriminant, n_max: u64) -> u64 {
    let mut w = 1u64;
    while w < n_max && d.abs() * (w + 1) * (w + 1) <= SERIES_BUDGET {
        w += 1;
    }
    w.min(n_max)
}

/// Checks `S_D(G_{D,k,e}) = |D|^e C(k+e−1,e)/C(k+2e−1,2e) · F_{D,k,e}`
/// coefficientwise for `1 <= n <= n_max`, plus both series routes on a
/// smaller window.
pub fn verify_theorem1(spec: &GeneratorSpec, n_max: u64) -> LiftReport {
    verify_theorem1_with(spec, n_max, &VerifyOptions::default())
}

pub fn verify_theorem1_with(spec: &GeneratorSpec, n_max: u64, opts: &VerifyOptions) -> LiftReport {
    let ratio = spec.lift_ratio();
    let mut mismatches = Vec::new();

    let f = f_coefficients(spec, n_max);
    let g = lifted_g_coefficients(spec, n_max);
    for (i, (fv, gv)) in f.iter().zip(&g).enumerate() {
        let rhs = &ratio * fv;
        if *gv != rhs {
            mismatches.push(Mismatch {
                index: i as u64 + 1,
                lhs: gv.clone(),
                rhs,
                check: Check::Identity,
            });
        }
    }

    let window = opts
        .series_window
        .unwrap_or_else(|| default_series_window(spec.d, n_max))
        .min(n_max);
    if window > 0 {
        series_checks(spec, window as usize, &ratio, &f, &g, &mut mismatches);
    }

    LiftReport {
        spec: *spec,
        n_max,
        compared_coefficients: n_max,
        series_window: window,
        ratio,
        verdict: mismatches.is_empty(),
        mismatches,
    }
}

fn series_checks(
    spec: &GeneratorSpec,
    window: usize,
    ratio: &Rational,
    f: &[Rational],
    g: &[Rational],
    out: &mut Vec<Mismatch>,
) {
    let structural = |index: u64, lhs: Rational| Mismatch {
        index,
        lhs,
        rhs: Rational::zero(),
        check: Check::Structure,
    };
    let prec = window + 1;
    let f_series = match f_generator_series(spec, prec) {
        Ok(s) => s,
        Err(_) => {
            out.push(structural(0, Rational::one()));
            return;
        }
    };
    if !f_series.coeffs()[0].is_zero() {
        out.push(structural(0, f_series.coeffs()[0].clone()));
    }
    for n in 1..prec {
        if f_series.coeffs()[n] != f[n - 1] {
            out.push(Mismatch {
                index: n as u64,
                lhs: f[n - 1].clone(),
                rhs: f_series.coeffs()[n].clone(),
                check: Check::FSeries,
            });
        }
    }

    let g_prec = lift_precision_bound(spec.d, prec) + 1;
    let g_series = match g_generator_series(spec, g_prec) {
        Ok(s) => s,
        Err(_) => {
            out.push(structural(0, Rational::one()));
            return;
        }
    };
    if !g_series.coeffs()[0].is_zero() {
        out.push(structural(0, g_series.coeffs()[0].clone()));
    }
    let lifted = match shimura_lift(&g_series, spec.d, spec.ell(), prec) {
        Ok(s) => s,
        Err(Error::PlusSpaceViolation(idx)) => {
            for i in idx {
                out.push(structural(i as u64, g_series.coeffs()[i].clone()));
            }
            return;
        }
        Err(_) => {
            out.push(structural(0, Rational::one()));
            return;
        }
    };
    for n in 1..prec {
        if lifted.coeffs()[n] != g[n - 1] {
            out.push(Mismatch {
                index: n as u64,
                lhs: g[n - 1].clone(),
                rhs: lifted.coeffs()[n].clone(),
                check: Check::GLift,
            });
        }
    }
    let scaled = f_series.scale(ratio);
    for n in 0..prec {
        if lifted.coeffs()[n] != scaled.coeffs()[n] {
            out.push(Mismatch {
                index: n as u64,
                lhs: lifted.coeffs()[n].clone(),
                rhs: scaled.coeffs()[n].clone(),
                check: Check::SeriesIdentity,
            });
        }
    }
}
