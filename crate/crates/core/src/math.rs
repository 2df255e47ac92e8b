//! Small numeric helpers shared by the parameter formulas.

/// `log2(n)` as a real number, with `log2(1) = 0`.
pub(crate) fn log2(n: usize) -> f64 {
    libm::log2(n.max(1) as f64)
}

/// `ceil(log2(n))`, at least 1.
pub(crate) fn ceil_log2(n: usize) -> u64 {
    let mut bits = 0u64;
    while (1usize << bits) < n.max(2) {
        bits += 1;
    }
    bits.max(1)
}

/// `ceil(log2 log2 log2 max(n, 16))`; the iterated logarithm that bounds
/// the number of approximation-improvement phases.
pub(crate) fn log3_ceil(n: usize) -> u32 {
    let l = log2(n.max(16));
    libm::ceil(libm::log2(libm::log2(l))) as u32
}

/// `floor(n^(1/h))`, corrected for floating error.
pub(crate) fn floor_root(n: usize, h: u32) -> usize {
    if h <= 1 {
        return n;
    }
    let mut r = libm::floor(libm::pow(n as f64, 1.0 / h as f64)) as usize;
    while r > 0 && pow_sat(r, h) > n {
        r -= 1;
    }
    while pow_sat(r + 1, h) <= n {
        r += 1;
    }
    r
}

pub(crate) fn pow_sat(base: usize, exp: u32) -> usize {
    let mut acc = 1usize;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// Binomial coefficient with saturation.
pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Smallest `i >= 1` with `h^i >= target`.
pub(crate) fn hop_iterations(h: usize, target: usize) -> u32 {
    let mut i = 1u32;
    let mut reach = h.max(2);
    while reach < target {
        reach = reach.saturating_mul(h.max(2));
        i += 1;
    }
    i
}
