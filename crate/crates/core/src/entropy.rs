//! Binary entropy and its inverse on `[0, 1/2]`.

use crate::error::{Error, Result};

/// `H2(p) = -p log2 p - (1-p) log2 (1-p)`, with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    xlog2x(p) + xlog2x(1.0 - p)
}

/// `-x log2 x`, zero at `x = 0` and `x = 1`.
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// The unique `p` in `[0, 1/2]` with `H2(p) = s`.
///
/// Newton iteration on the monotone branch, safeguarded by a bracket that
/// falls back to bisection whenever a step leaves it.
pub fn inverse_binary_entropy(s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::EntropyOutOfRange { index: 0, value: s });
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    if s == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    // H2(p) >= 2p on [0, 1/2], and the curve is concave, so s/2 undershoots.
    let mut p = (s / 2.0).clamp(f64::MIN_POSITIVE, 0.5);
    for _ in 0..200 {
        let f = binary_entropy(p) - s;
        if f == 0.0 {
            return Ok(p);
        }
        if f < 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        let slope = ((1.0 - p) / p).log2();
        let mut next = p - f / slope;
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        if next == p || hi - lo <= f64::EPSILON * hi {
            p = next;
            break;
        }
        p = next;
    }
    Ok(p)
}
