//! Brute-force partition counting, an oracle for product-side coefficients.

use crate::{HarnessError, Result};

/// Largest n accepted by [`partition_count`].
pub const PARTITION_BOUND: u32 = 80;

/// Which partitions to count. Parts must lie in one of `residues` mod
/// `modulus` (all parts when `residues` is empty), and consecutive parts in
/// sorted order must differ by at least `min_gap` (0 allows repeats).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionRule {
    pub modulus: u32,
    pub residues: Vec<u32>,
    pub min_gap: u32,
}

impl PartitionRule {
    /// Parts in the given residue classes, repeats allowed.
    pub fn residues(modulus: u32, residues: &[u32]) -> Self {
        PartitionRule { modulus, residues: residues.to_vec(), min_gap: 0 }
    }

    /// Any parts, adjacent parts differing by at least `gap`.
    pub fn gap(gap: u32) -> Self {
        PartitionRule { modulus: 1, residues: vec![], min_gap: gap }
    }

    fn allows(&self, part: u32) -> bool {
        self.residues.is_empty() || self.residues.contains(&(part % self.modulus.max(1)))
    }
}

pub fn partition_count(n: u32, rule: &PartitionRule) -> Result<u64> {
    if n > PARTITION_BOUND {
        return Err(HarnessError::BoundExceeded { n, bound: PARTITION_BOUND });
    }
    let parts: Vec<u32> = (1..=n).filter(|&p| rule.allows(p)).collect();
    Ok(count(n, &parts, parts.len(), rule.min_gap, None))
}

// parts chosen in decreasing order from parts[..upto]; `prev` is the last part taken
fn count(rest: u32, parts: &[u32], upto: usize, gap: u32, prev: Option<u32>) -> u64 {
    if rest == 0 {
        return 1;
    }
    let mut total = 0;
    for i in (0..upto).rev() {
        let p = parts[i];
        if p > rest {
            continue;
        }
        if let Some(prev) = prev {
            if p > prev || prev - p < gap {
                continue;
            }
        }
        total += count(rest - p, parts, i + 1, gap, Some(p));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let rr = PartitionRule::residues(5, &[1, 4]);
        assert_eq!(partition_count(0, &rr).unwrap(), 1);
        assert_eq!(partition_count(4, &rr).unwrap(), 2);
        assert_eq!(partition_count(6, &rr).unwrap(), 3);
        let gap = PartitionRule::gap(2);
        assert_eq!(partition_count(6, &gap).unwrap(), 3);
        // unrestricted partitions of 10
        assert_eq!(partition_count(10, &PartitionRule::gap(0)).unwrap(), 42);
        // distinct parts of 10
        assert_eq!(partition_count(10, &PartitionRule::gap(1)).unwrap(), 10);
    }

    #[test]
    fn bound_is_enforced() {
        let r = partition_count(PARTITION_BOUND + 1, &PartitionRule::gap(0));
        assert!(matches!(r, Err(HarnessError::BoundExceeded { .. })));
    }
}
