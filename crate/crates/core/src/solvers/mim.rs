//! Meet-in-the-middle search for a subset sum inside a window.

use std::cmp::Ordering;
use std::ops::{Add, Sub};

use crate::error::{Error, Result};

/// Largest item count the two-list search accepts (`2^20` sums per half).
pub const MIM_LIMIT: usize = 40;

/// `f64` with a total order, for sorting float sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrdF64(pub f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for OrdF64 {
    type Output = OrdF64;
    fn add(self, o: OrdF64) -> OrdF64 {
        OrdF64(self.0 + o.0)
    }
}

impl Sub for OrdF64 {
    type Output = OrdF64;
    fn sub(self, o: OrdF64) -> OrdF64 {
        OrdF64(self.0 - o.0)
    }
}

impl<'a> Add<&'a OrdF64> for &'a OrdF64 {
    type Output = OrdF64;
    fn add(self, o: &'a OrdF64) -> OrdF64 {
        OrdF64(self.0 + o.0)
    }
}

impl<'a> Sub<&'a OrdF64> for &'a OrdF64 {
    type Output = OrdF64;
    fn sub(self, o: &'a OrdF64) -> OrdF64 {
        OrdF64(self.0 - o.0)
    }
}

fn half_sums<T>(items: &[T], zero: &T) -> Vec<(T, u64)>
where
    T: Clone,
    for<'a> &'a T: Add<&'a T, Output = T>,
{
    let mut sums = Vec::with_capacity(1 << items.len());
    sums.push((zero.clone(), 0u64));
    for (i, v) in items.iter().enumerate() {
        let len = sums.len();
        for k in 0..len {
            let s = &sums[k].0 + v;
            let m = sums[k].1 | 1 << i;
            sums.push((s, m));
        }
    }
    sums
}

/// Bitmask of a subset whose sum lies in `[lo, hi]`, if any.
///
/// Deterministic: scans left-half masks in increasing order and pairs each
/// with the smallest admissible right-half sum.
pub fn search_window<T>(items: &[T], lo: &T, hi: &T, zero: &T) -> Result<Option<u64>>
where
    T: Clone + Ord,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    if items.len() > MIM_LIMIT {
        return Err(Error::InstanceTooLarge { n: items.len(), limit: MIM_LIMIT });
    }
    if lo > hi {
        return Ok(None);
    }
    let half = items.len() / 2;
    let mut left = half_sums(&items[..half], zero);
    left.sort_by_key(|&(_, m)| m);
    let mut right = half_sums(&items[half..], zero);
    right.sort();
    for (a, lmask) in &left {
        let need_lo = lo - a;
        let need_hi = hi - a;
        let idx = right.partition_point(|(s, _)| *s < need_lo);
        if let Some((s, rmask)) = right.get(idx) {
            if *s <= need_hi {
                return Ok(Some(lmask | rmask << half));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn finds_exact_window() {
        let w = big(&[2, 3, 5]);
        let hit = search_window(&w, &BigInt::from(8), &BigInt::from(8), &BigInt::from(0)).unwrap();
        assert_eq!(hit, Some(0b110));
        let miss = search_window(&w, &BigInt::from(9), &BigInt::from(9), &BigInt::from(0)).unwrap();
        assert_eq!(miss, None);
    }

    #[test]
    fn float_window() {
        let w: Vec<OrdF64> = [0.2, 0.3, 0.5].iter().map(|&x| OrdF64(x)).collect();
        let z = OrdF64(0.0);
        assert_eq!(search_window(&w, &OrdF64(0.79), &OrdF64(0.81), &z).unwrap(), Some(0b110));
        assert_eq!(search_window(&w, &OrdF64(0.93), &OrdF64(0.97), &z).unwrap(), None);
    }

    #[test]
    fn rejects_oversized() {
        let w = vec![BigInt::from(1); MIM_LIMIT + 1];
        let z = BigInt::from(0);
        assert!(matches!(search_window(&w, &z, &z, &z), Err(Error::InstanceTooLarge { .. })));
    }
}
