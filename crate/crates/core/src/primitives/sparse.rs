//! Density-charged sparse distance products.

use alloc::string::ToString;

use crate::error::{Error, Result};
use crate::ledger::RoundLedger;
use crate::matrix::TropicalMatrix;

/// `ceil((rho_s rho_t rho_st)^(1/3) / n^(2/3)) + 1` with densities
/// `rho = nnz / n`, computed exactly in integers.
pub fn matmul_rounds(nnz_s: u64, nnz_t: u64, nnz_st: u64, n: usize) -> u64 {
    let n = n.max(1) as u128;
    let lhs = nnz_s as u128 * nnz_t as u128 * nnz_st as u128;
    let n5 = n * n * n * n * n;
    let mut r: u128 = 0;
    while r * r * r * n5 < lhs {
        r += 1;
    }
    r as u64 + 1
}

/// Exact product `s * t`, charged by the density formula.
///
/// `max_product_entries` is the caller's bound on the number of finite
/// entries of the product (`rho_st * n`); exceeding it is a
/// [`Error::DensityViolation`].
pub fn sparse_minplus_mul(
    s: &TropicalMatrix,
    t: &TropicalMatrix,
    max_product_entries: u64,
    ledger: &mut RoundLedger,
) -> Result<TropicalMatrix> {
    sparse_minplus_mul_named("sparse-matmul", s, t, max_product_entries, ledger)
}

pub(crate) fn sparse_minplus_mul_named(
    primitive: &str,
    s: &TropicalMatrix,
    t: &TropicalMatrix,
    max_product_entries: u64,
    ledger: &mut RoundLedger,
) -> Result<TropicalMatrix> {
    let st = s.product(t);
    let actual = st.nnz();
    if actual > max_product_entries {
        return Err(Error::DensityViolation {
            primitive: primitive.to_string(),
            actual,
            bound: max_product_entries,
        });
    }
    let rounds = matmul_rounds(s.nnz(), t.nnz(), max_product_entries, s.n());
    ledger.charge(primitive, rounds);
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_densities_cost_two_rounds() {
        for n in [1usize, 16, 4096] {
            assert_eq!(matmul_rounds(n as u64, n as u64, n as u64, n), 2);
        }
        // dense n x n: (n * n * n)^(1/3) / n^(2/3) = n^(1/3)
        assert_eq!(matmul_rounds(64 * 64, 64 * 64, 64 * 64, 64), 5);
    }

    #[test]
    fn identity_product_and_violation() {
        let m = TropicalMatrix::from_rows(3, alloc::vec![alloc::vec![(0, 0), (2, 4)], alloc::vec![(1, 0)], alloc::vec![(0, 1), (2, 0)]]);
        let id = TropicalMatrix::identity(3);
        let mut l = RoundLedger::standard(3);
        assert_eq!(sparse_minplus_mul(&id, &m, 9, &mut l).unwrap(), m);
        assert!(matches!(
            sparse_minplus_mul(&m, &m, 2, &mut l),
            Err(Error::DensityViolation { .. })
        ));
        assert_eq!(l.entries().len(), 1);
    }
}
