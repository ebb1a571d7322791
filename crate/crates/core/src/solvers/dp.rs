//! Pseudo-polynomial subset-sum reachability with back-pointers.

use crate::error::{Error, Result};

/// Table-size policy: `items * (target + 1)` cells.
pub const MAX_TABLE_CELLS: u128 = 100_000_000;

const UNREACHED: u32 = u32::MAX;

/// Finds a subset whose sum lies in `[lo, hi]`, preferring the smallest
/// such sum. Returns item indices in increasing order.
pub fn subset_sum_window(values: &[u64], lo: u64, hi: u64) -> Result<Option<Vec<usize>>> {
    if lo > hi {
        return Ok(None);
    }
    let total: u128 = values.iter().map(|&v| v as u128).sum();
    if (lo as u128) > total {
        return Ok(None);
    }
    let cap = (hi as u128).min(total);
    let cells = (values.len() as u128 + 1) * (cap + 1);
    if cells > MAX_TABLE_CELLS {
        return Err(Error::TableTooLarge { cells, limit: MAX_TABLE_CELLS });
    }
    let cap = cap as usize;
    // parent[t] = index of the item whose addition first reached t
    let mut parent = vec![UNREACHED; cap + 1];
    let mut reached = vec![false; cap + 1];
    reached[0] = true;
    for (i, &v) in values.iter().enumerate() {
        let v = v as usize;
        if v == 0 || v > cap {
            continue;
        }
        for t in (v..=cap).rev() {
            if !reached[t] && reached[t - v] {
                reached[t] = true;
                parent[t] = i as u32;
            }
        }
    }
    let Some(mut t) = (lo as usize..=cap).find(|&t| reached[t]) else {
        return Ok(None);
    };
    let mut picked = Vec::new();
    while t > 0 {
        let i = parent[t] as usize;
        picked.push(i);
        t -= values[i] as usize;
    }
    picked.reverse();
    Ok(Some(picked))
}

/// Indices of a subset summing exactly to `target`, if one exists.
pub fn solve_subset_sum_dp(values: &[u64], target: u64) -> Result<Option<Vec<usize>>> {
    subset_sum_window(values, target, target)
}

/// Indices of a proper nonempty subset holding exactly half the total.
pub fn solve_partition_dp(values: &[u64]) -> Result<Option<Vec<usize>>> {
    let total: u128 = values.iter().map(|&v| v as u128).sum();
    if total % 2 == 1 || values.len() < 2 {
        return Ok(None);
    }
    if total == 0 {
        return Ok(Some(vec![0]));
    }
    subset_sum_window(values, (total / 2) as u64, (total / 2) as u64)
}
