use crate::error::{Error, Result};
use crate::linalg::CMat;

/// Threshold policy for numeric rank.
///
/// A singular value is kept when it exceeds
/// `max(rows, cols) · σ_max · factor`. The rank is trusted only when the
/// ratio between the last kept and the first dropped value is at least
/// `min_gap`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TolPolicy {
    pub factor: f64,
    pub min_gap: f64,
}

impl Default for TolPolicy {
    fn default() -> Self {
        Self {
            factor: 1e-11,
            min_gap: 1e3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    pub sigma_max: f64,
    pub threshold: f64,
    pub last_kept: Option<f64>,
    pub first_dropped: Option<f64>,
    /// `last_kept / first_dropped`; infinite when either side is empty or
    /// the first dropped value is exactly zero.
    #[serde(serialize_with = "serialize_gap")]
    pub gap_ratio: f64,
    pub gap_ok: bool,
}

fn serialize_gap<S: serde::Serializer>(g: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if g.is_finite() {
        s.serialize_f64(*g)
    } else {
        s.serialize_str("inf")
    }
}

impl RankReport {
    /// Dimension of the kernel of the matrix as a map on column vectors.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank
    }
}

pub fn empirical_rank(m: &CMat, policy: TolPolicy) -> Result<RankReport> {
    let (rows, cols) = (m.nrows(), m.ncols());
    let sv = crate::linalg::singular_values(m)?;
    Ok(classify(&sv, rows, cols, policy))
}

fn classify(sv: &[f64], rows: usize, cols: usize, policy: TolPolicy) -> RankReport {
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let threshold = rows.max(cols) as f64 * sigma_max * policy.factor;
    let rank = if sigma_max == 0.0 {
        0
    } else {
        sv.iter().take_while(|&&s| s > threshold).count()
    };
    let last_kept = rank.checked_sub(1).map(|k| sv[k]);
    let first_dropped = sv.get(rank).copied();
    let gap_ratio = match (last_kept, first_dropped) {
        (Some(a), Some(b)) if b > 0.0 => a / b,
        _ => f64::INFINITY,
    };
    RankReport {
        rank,
        rows,
        cols,
        sigma_max,
        threshold,
        last_kept,
        first_dropped,
        gap_ratio,
        gap_ok: gap_ratio >= policy.min_gap,
    }
}

/// Orthonormal basis (as columns) of the numeric kernel, taken from the
/// right singular vectors below the rank threshold.
pub fn numeric_kernel(m: &CMat, policy: TolPolicy) -> Result<CMat> {
    let cols = m.ncols();
    let svd = m
        .svd()
        .map_err(|e| Error::Numerical(format!("svd: {e:?}")))?;
    let s = svd.S().column_vector();
    let sv: Vec<f64> = (0..s.nrows()).map(|k| s[k].re).collect();
    let rep = classify(&sv, m.nrows(), cols, policy);
    let v = svd.V();
    let k = cols - rep.rank;
    Ok(CMat::from_fn(cols, k, |i, j| v[(i, rep.rank + j)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use faer::c64;

    #[test]
    fn identity_has_full_rank() {
        let r = empirical_rank(&linalg::identity(100), TolPolicy::default()).unwrap();
        assert_eq!(r.rank, 100);
        assert!(r.gap_ok);
    }

    #[test]
    fn outer_product_has_rank_one() {
        let u = CMat::from_fn(30, 1, |i, _| c64::new(1.0 + i as f64, 0.5));
        let v = CMat::from_fn(1, 30, |_, j| c64::new(0.3, -(j as f64)));
        let r = empirical_rank(&(&u * &v), TolPolicy::default()).unwrap();
        assert_eq!(r.rank, 1);
        assert!(r.gap_ok);
    }

    #[test]
    fn zero_matrix() {
        let r = empirical_rank(&linalg::zeros(5, 5), TolPolicy::default()).unwrap();
        assert_eq!(r.rank, 0);
        assert_eq!(r.nullity(), 5);
    }

    #[test]
    fn kernel_is_annihilated() {
        let mut m = linalg::identity(6);
        m[(2, 2)] = c64::new(0.0, 0.0);
        m[(4, 4)] = c64::new(0.0, 0.0);
        let k = numeric_kernel(&m, TolPolicy::default()).unwrap();
        assert_eq!(k.ncols(), 2);
        assert!(linalg::max_abs(&(&m * &k)) < 1e-14);
    }

    #[test]
    fn small_gap_is_reported() {
        let sv = [1.0, 1e-10, 1e-12];
        let r = classify(&sv, 3, 3, TolPolicy::default());
        assert_eq!(r.rank, 2);
        assert!(!r.gap_ok);
    }
}
