//! Small exact integer combinatorics.

/// `k!` for `k ≤ 20`.
pub fn factorial(k: usize) -> u64 {
    assert!(k <= 20, "factorial overflows u64 beyond 20!");
    (1..=k as u64).product()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for t in 0..k as u64 {
        acc = acc * (n as u64 - t) / (t + 1);
    }
    acc
}

pub fn factorial_f64(k: usize) -> f64 {
    factorial(k) as f64
}

pub fn binomial_f64(n: usize, k: usize) -> f64 {
    binomial(n, k) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(5), 120);
        assert_eq!(factorial(20), 2_432_902_008_176_640_000);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(30, 15), 155_117_520);
    }
}
