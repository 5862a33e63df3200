//! Exact linear algebra over ℚ for spanning and independence checks of the
//! generators: conjecture determinants, rank against cusp-form dimensions,
//! and resumable sweeps over `ℓ`.

mod matrix;
mod sweep;

pub use matrix::{determinant, rank, RationalMatrix};
pub use sweep::{conjecture_sweep, read_records, JsonlSweepWriter, SweepOptions, SweepRecord};

use serde::{Deserialize, Serialize};

use crate::arith::OddFundamentalDiscriminant;
use crate::error::{Error, Result};
use crate::lifts::{f_coefficients, g_coefficients_at, lifted_g_coefficients_at, GeneratorSpec};

/// `dim S_w(SL₂(ℤ))` for even `w >= 4`.
pub fn dim_cusp_level1(weight: u64) -> Result<u64> {
    if weight < 4 || weight % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "level-one cusp forms need even weight >= 4, got {weight}"
        )));
    }
    let base = weight / 12;
    Ok(if weight % 12 == 2 { base - 1 } else { base })
}

/// Where the conjecture matrix takes its entries from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntrySource {
    /// Coefficients `g_{D,k,e}(4j)` of the lifted generator `S_D(G_{D,k,e})`.
    #[default]
    Lifted,
    /// Coefficients `c(4j)` of the half-integral weight generator `G_{D,k,e}`.
    HalfIntegral,
}

fn conjecture_specs(d: i64, ell: u32) -> Result<Vec<GeneratorSpec>> {
    let disc = OddFundamentalDiscriminant::new(d)?;
    if disc.value() < 0 {
        return Err(Error::InvalidArgument(format!("conjecture matrices need D > 0, got {d}")));
    }
    if ell % 2 == 1 || ell < 6 {
        return Err(Error::InvalidArgument(format!("ℓ must be even and at least 6, got {ell}")));
    }
    (1..=ell / 6)
        .map(|e| GeneratorSpec::new(d, ell - 2 * e, e))
        .collect()
}

/// Square matrix of size `⌊ℓ/6⌋` with entry `(e, j)` the coefficient at `4j`
/// of the generator `(D, ℓ−2e, e)`, for `e, j = 1..⌊ℓ/6⌋`.
pub fn conjecture_matrix(d: i64, ell: u32) -> Result<RationalMatrix> {
    conjecture_matrix_with(d, ell, EntrySource::Lifted)
}

pub fn conjecture_matrix_with(d: i64, ell: u32, source: EntrySource) -> Result<RationalMatrix> {
    let specs = conjecture_specs(d, ell)?;
    let size = specs.len();
    let columns: Vec<u64> = (1..=size as u64).map(|j| 4 * j).collect();
    let entries = specs
        .iter()
        .flat_map(|spec| match source {
            EntrySource::Lifted => lifted_g_coefficients_at(spec, &columns),
            EntrySource::HalfIntegral => g_coefficients_at(spec, &columns),
        })
        .collect();
    RationalMatrix::new(size, size, entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCheck {
    pub rank: usize,
    pub dim: u64,
    pub equal: bool,
}

/// Columns used by [`f_rank_check`] when none are requested: `dim + 4`.
pub fn default_rank_columns(ell: u32) -> Result<usize> {
    Ok(dim_cusp_level1(2 * ell as u64)? as usize + 4)
}

/// Rank of the matrix `f_{D,ℓ−2e,e}(n)` over `e = 1..⌊(ℓ−4)/2⌋`, `n = 1..n_cols`,
/// against `dim S_{2ℓ}(1)`.
pub fn f_rank_check(d: i64, ell: u32, n_cols: usize) -> Result<RankCheck> {
    OddFundamentalDiscriminant::new(d)?;
    let dim = dim_cusp_level1(2 * ell as u64)?;
    if n_cols < (2 * ell as usize) / 12 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} columns, got {n_cols}",
            (2 * ell) / 12
        )));
    }
    let specs = GeneratorSpec::all_with_ell(d, ell);
    if specs.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no generators with ℓ = {ell} and D = {d}"
        )));
    }
    let rows: Vec<_> = specs
        .iter()
        .map(|s| f_coefficients(s, n_cols as u64))
        .collect();
    let m = RationalMatrix::from_rows(rows)?;
    let rank = rank(&m);
    assert!(rank as u64 <= dim, "rank {rank} exceeds dim S_{}(1) = {dim}", 2 * ell);
    Ok(RankCheck {
        rank,
        dim,
        equal: rank as u64 == dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use crate::lifts::lifted_g_coefficient;

    #[test]
    fn dimensions() {
        assert_eq!(dim_cusp_level1(12).unwrap(), 1);
        assert_eq!(dim_cusp_level1(26).unwrap(), 1);
        assert_eq!(dim_cusp_level1(24).unwrap(), 2);
        assert_eq!(dim_cusp_level1(14).unwrap(), 0);
        assert_eq!(dim_cusp_level1(4).unwrap(), 0);
        assert!(dim_cusp_level1(13).is_err());
        assert!(dim_cusp_level1(2).is_err());
        // dim M_w = dim S_w + 1 matches the generating function 1/((1-x^4)(1-x^6)).
        for w in (4..200u64).step_by(2) {
            let m = (0..=w / 4).filter(|a| (w - 4 * a) % 6 == 0).count() as u64;
            assert_eq!(dim_cusp_level1(w).unwrap() + 1, m, "w={w}");
        }
    }

    #[test]
    fn conjecture_matrix_shapes() {
        let m = conjecture_matrix(1, 6).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        let spec = GeneratorSpec::new(1, 4, 1).unwrap();
        assert_eq!(m.get(0, 0), &lifted_g_coefficient(&spec, 4));

        let m = conjecture_matrix(1, 12).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        let rows = [GeneratorSpec::new(1, 10, 1).unwrap(), GeneratorSpec::new(1, 8, 2).unwrap()];
        for (i, s) in rows.iter().enumerate() {
            for j in 0..2 {
                assert_eq!(m.get(i, j), &lifted_g_coefficient(s, 4 * (j as u64 + 1)));
            }
        }
        assert!(conjecture_matrix(-3, 12).is_err());
        assert!(conjecture_matrix(1, 7).is_err());
        assert!(conjecture_matrix(1, 4).is_err());
    }

    #[test]
    fn half_integral_entries_are_series_coefficients() {
        let spec = GeneratorSpec::new(5, 4, 1).unwrap();
        let g = crate::lifts::g_generator_series(&spec, 41).unwrap();
        let idx: Vec<u64> = (1..41).collect();
        let closed = g_coefficients_at(&spec, &idx);
        for (n, c) in idx.iter().zip(closed) {
            assert_eq!(g.coeffs()[*n as usize], c, "n={n}");
        }
        let m = conjecture_matrix_with(5, 6, EntrySource::HalfIntegral).unwrap();
        assert_eq!(m.get(0, 0), &g.coeffs()[4]);
        assert_ne!(m.get(0, 0), &Rational::zero());
    }

    #[test]
    fn rank_small() {
        let r = f_rank_check(1, 6, 4).unwrap();
        assert_eq!(r, RankCheck { rank: 1, dim: 1, equal: true });
        let r = f_rank_check(1, 12, 6).unwrap();
        assert_eq!(r, RankCheck { rank: 2, dim: 2, equal: true });
        assert!(f_rank_check(1, 12, 1).is_err());
    }
}
